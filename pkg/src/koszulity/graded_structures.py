"""Connected graded R-rings and R-corings with finite support.

Strong grading, primitives, indecomposables, the quadratic constructions
<V,W> (tensor ring modulo the ideal generated by W) and {V,W} (intersection
subcoring), shriek duals, and direct products.  Components are Bimodules,
structure maps are BimoduleMaps, all validation is exact.
"""

from __future__ import annotations

from .exact_linalg import (SparseMatrix, Subspace, solve_columns,
                           hstack, vstack, rank, intersect)
from .bimodule import (Bimodule, BimoduleMap, SubBimodule, BaseRing,
                       tensor, tensor_map, tensor_many, tensor_power,
                       unit_bimodule, zero_bimodule, kernel_sub, image_sub,
                       UNIT_LABEL)
from .errors import StructureError


# ---------------------------------------------------------------------------
# canonical identifications
# ---------------------------------------------------------------------------

def left_unit_map(base: BaseRing, V: Bimodule) -> BimoduleMap:
    'R (x) V -> V, ("1", v) -> v.'
    src = tensor(unit_bimodule(base), V)
    return BimoduleMap.from_basis_action(src, V, lambda key, l: [(l[1], 1)])


def right_unit_map(base: BaseRing, V: Bimodule) -> BimoduleMap:
    'V (x) R -> V, (v, "1") -> v.'
    src = tensor(V, unit_bimodule(base))
    return BimoduleMap.from_basis_action(src, V, lambda key, l: [(l[0], 1)])


def left_unit_section(base: BaseRing, V: Bimodule) -> BimoduleMap:
    'V -> R (x) V, v -> ("1", v); inverse of the left unit map.'
    tgt = tensor(unit_bimodule(base), V)
    return BimoduleMap.from_basis_action(
        V, tgt, lambda key, l: [((UNIT_LABEL, l), 1)])


def right_unit_section(base: BaseRing, V: Bimodule) -> BimoduleMap:
    'V -> V (x) R, v -> (v, "1"); inverse of the right unit map.'
    tgt = tensor(V, unit_bimodule(base))
    return BimoduleMap.from_basis_action(
        V, tgt, lambda key, l: [((l, UNIT_LABEL), 1)])


def associator(P: Bimodule, Q: Bimodule, S: Bimodule) -> BimoduleMap:
    'The relabeling ((p,q),s) -> (p,(q,s)) between the two bracketings.'
    src = tensor(tensor(P, Q), S)
    tgt = tensor(P, tensor(Q, S))
    return BimoduleMap.from_basis_action(
        src, tgt, lambda key, l: [((l[0][0], (l[0][1], l[1])), 1)])


def _as_word(label, letters: int) -> tuple:
    'View a flat word label as a tuple of letters (single letters are bare).'
    return label if letters != 1 else (label,)


def _word_label(word: tuple, letters: int):
    return word if letters != 1 else word[0]


def _check_components(base, components, top_degree):
    for n, comp in components.items():
        if comp.base != base:
            raise StructureError(f'component in degree {n} lives over the wrong base')
        if (n < 0 or n > top_degree) and not comp.is_zero():
            raise StructureError(f'nonzero component in degree {n} outside 0..{top_degree}')


# ---------------------------------------------------------------------------
# graded rings
# ---------------------------------------------------------------------------

class GradedRing:
    """A connected graded R-ring with finite support.

    components[n] is A^n for 0 <= n <= top_degree (A^0 = R), mult[(p, q)]
    is mu^{p,q} : A^p (x) A^q -> A^{p+q} for p, q >= 1.  Multiplications by
    degree 0 are the canonical identifications and are not stored.
    """

    def __init__(self, base: BaseRing, components: dict, mult: dict,
                 top_degree: int, validate: bool = True):
        self.base = base
        self.top_degree = top_degree
        _check_components(base, components, top_degree)
        self.components = {n: components.get(n, zero_bimodule(base))
                           for n in range(top_degree + 1)}
        self.mult = {}
        for (p, q), f in mult.items():
            if p < 1 or q < 1 or p + q > top_degree:
                raise StructureError(f'multiplication component ({p},{q}) out of range')
            if not f.is_zero():
                self.mult[(p, q)] = f
        self.support_truncated = False
        if validate:
            self._validate()

    def component(self, n: int) -> Bimodule:
        if 0 <= n <= self.top_degree:
            return self.components[n]
        return zero_bimodule(self.base)

    def mu(self, p: int, q: int) -> BimoduleMap:
        if p == 0:
            return left_unit_map(self.base, self.component(q))
        if q == 0:
            return right_unit_map(self.base, self.component(p))
        f = self.mult.get((p, q))
        if f is None:
            return BimoduleMap.zero(tensor(self.component(p), self.component(q)),
                                    self.component(p + q))
        return f

    def _validate(self):
        if self.component(0) != unit_bimodule(self.base):
            raise StructureError('ring is not connected: A^0 != R')
        for (p, q), f in self.mult.items():
            if f.source != tensor(self.component(p), self.component(q)):
                raise StructureError(f'mu({p},{q}) has wrong source')
            if f.target != self.component(p + q):
                raise StructureError(f'mu({p},{q}) has wrong target')
        for p in range(1, self.top_degree + 1):
            for q in range(1, self.top_degree + 1 - p):
                for r in range(1, self.top_degree + 1 - p - q):
                    Ap, Aq, Ar = (self.component(x) for x in (p, q, r))
                    lhs = self.mu(p + q, r).compose(
                        tensor_map(self.mu(p, q), BimoduleMap.identity(Ar)))
                    rhs = self.mu(p, q + r).compose(
                        tensor_map(BimoduleMap.identity(Ap), self.mu(q, r)))
                    if lhs != rhs.compose(associator(Ap, Aq, Ar)):
                        raise StructureError(f'associativity fails at ({p},{q},{r})')

    def mu_partition(self, parts: tuple) -> BimoduleMap:
        'mu_m : A^{m_1} (x) ... (x) A^{m_k} -> A^m on the flat word space, folded left.'
        k = len(parts)
        assert k >= 1 and all(p >= 1 for p in parts)
        if k == 1:
            return BimoduleMap.identity(self.component(parts[0]))
        comps = [self.component(p) for p in parts]
        flat = tensor_many(comps)
        left_flat = tensor_many(comps[:-1])
        cut = BimoduleMap.from_basis_action(
            flat, tensor(left_flat, comps[-1]),
            lambda key, l: [((_word_label(l[:-1], k - 1), l[-1]), 1)])
        step = tensor_map(self.mu_partition(parts[:-1]),
                          BimoduleMap.identity(comps[-1]))
        return self.mu(sum(parts[:-1]), parts[-1]).compose(step).compose(cut)

    def iterated_mu(self, n: int) -> BimoduleMap:
        'mu_n : (A^1)^(n) -> A^n, the fully iterated multiplication.'
        return self.mu_partition((1,) * n)

    def dims(self) -> list:
        return [self.component(n).dim for n in range(self.top_degree + 1)]

    def __eq__(self, other):
        if not isinstance(other, GradedRing):
            return NotImplemented
        return (self.base == other.base and self.top_degree == other.top_degree
                and self.components == other.components and self.mult == other.mult)

    def __repr__(self):
        return f'GradedRing(top={self.top_degree}, dims={self.dims()})'


# ---------------------------------------------------------------------------
# graded corings
# ---------------------------------------------------------------------------

class GradedCoring:
    """A connected graded R-coring with finite support.

    comult[(p, q)] is Delta_{p,q} : C_{p+q} -> C_p (x) C_q for p, q >= 1;
    the components against degree 0 are the canonical identifications.
    """

    def __init__(self, base: BaseRing, components: dict, comult: dict,
                 top_degree: int, validate: bool = True):
        self.base = base
        self.top_degree = top_degree
        _check_components(base, components, top_degree)
        self.components = {n: components.get(n, zero_bimodule(base))
                           for n in range(top_degree + 1)}
        self.comult = {}
        for (p, q), f in comult.items():
            if p < 1 or q < 1 or p + q > top_degree:
                raise StructureError(f'comultiplication component ({p},{q}) out of range')
            if not f.is_zero():
                self.comult[(p, q)] = f
        self.support_truncated = False
        if validate:
            self._validate()

    def component(self, n: int) -> Bimodule:
        if 0 <= n <= self.top_degree:
            return self.components[n]
        return zero_bimodule(self.base)

    def delta(self, p: int, q: int) -> BimoduleMap:
        if p == 0:
            return left_unit_section(self.base, self.component(q))
        if q == 0:
            return right_unit_section(self.base, self.component(p))
        f = self.comult.get((p, q))
        if f is None:
            return BimoduleMap.zero(self.component(p + q),
                                    tensor(self.component(p), self.component(q)))
        return f

    def _validate(self):
        if self.component(0) != unit_bimodule(self.base):
            raise StructureError('coring is not connected: C_0 != R')
        for (p, q), f in self.comult.items():
            if f.source != self.component(p + q):
                raise StructureError(f'delta({p},{q}) has wrong source')
            if f.target != tensor(self.component(p), self.component(q)):
                raise StructureError(f'delta({p},{q}) has wrong target')
        for p in range(1, self.top_degree + 1):
            for q in range(1, self.top_degree + 1 - p):
                for r in range(1, self.top_degree + 1 - p - q):
                    Cp, Cq, Cr = (self.component(x) for x in (p, q, r))
                    lhs = tensor_map(self.delta(p, q),
                                     BimoduleMap.identity(Cr)).compose(self.delta(p + q, r))
                    rhs = tensor_map(BimoduleMap.identity(Cp),
                                     self.delta(q, r)).compose(self.delta(p, q + r))
                    if rhs != associator(Cp, Cq, Cr).compose(lhs):
                        raise StructureError(f'coassociativity fails at ({p},{q},{r})')

    def delta_partition(self, parts: tuple) -> BimoduleMap:
        'Delta_m : C_m -> C_{m_1} (x) ... (x) C_{m_k}, flat word target.'
        k = len(parts)
        assert k >= 1 and all(p >= 1 for p in parts)
        if k == 1:
            return BimoduleMap.identity(self.component(parts[0]))
        head, rest = parts[0], parts[1:]
        inner = self.delta_partition(rest)
        first = self.delta(head, sum(rest))
        step = tensor_map(BimoduleMap.identity(self.component(head)),
                          inner).compose(first)
        flat = tensor_many([self.component(p) for p in parts])
        flatten = BimoduleMap.from_basis_action(
            step.target, flat,
            lambda key, l: [(_as_word(l[0], 1) + _as_word(l[1], k - 1), 1)])
        return flatten.compose(step)

    def iterated_delta(self, n: int) -> BimoduleMap:
        'Delta^n : C_n -> (C_1)^(n), the fully iterated comultiplication.'
        return self.delta_partition((1,) * n)

    def dims(self) -> list:
        return [self.component(n).dim for n in range(self.top_degree + 1)]

    def __eq__(self, other):
        if not isinstance(other, GradedCoring):
            return NotImplemented
        return (self.base == other.base and self.top_degree == other.top_degree
                and self.components == other.components and self.comult == other.comult)

    def __repr__(self):
        return f'GradedCoring(top={self.top_degree}, dims={self.dims()})'


# ---------------------------------------------------------------------------
# strong grading, primitives, indecomposables
# ---------------------------------------------------------------------------

def is_strongly_graded_ring(A: GradedRing):
    """True iff every iterated mu_n : (A^1)^(n) -> A^n is surjective.

    Returns (bool, witness); the witness names the first failing degree and
    a basis vector of A^n outside the image.
    """
    for n in range(2, A.top_degree + 1):
        target = A.component(n)
        if target.is_zero():
            continue
        mu_n = A.iterated_mu(n)
        if mu_n.rank() == target.dim:
            continue
        im = image_sub(mu_n)
        for key, labels in target.blocks.items():
            part = im.part(key)
            if part.dim == len(labels):
                continue
            for i, l in enumerate(labels):
                if not part.contains_vector({i: 1}):
                    return False, {'degree': n, 'block': key, 'cokernel_label': l}
        return False, {'degree': n}
    return True, None


def is_strongly_graded_coring(C: GradedCoring):
    'True iff every iterated Delta^n is injective; the witness is a kernel vector.'
    for n in range(2, C.top_degree + 1):
        source = C.component(n)
        if source.is_zero():
            continue
        ker = kernel_sub(C.iterated_delta(n))
        if ker.dim:
            key, sub = next(iter(ker.parts.items()))
            vec = sub.basis.column(0)
            labels = source.blocks[key]
            return False, {'degree': n, 'block': key,
                           'kernel_vector': {repr(labels[i]): str(v)
                                             for i, v in sorted(vec.items())}}
    return True, None


def primitive_dims(C: GradedCoring) -> dict:
    'n -> dim (PC)_n, the joint kernel of all Delta_{p,q} with p, q >= 1.'
    out = {}
    for n in range(1, C.top_degree + 1):
        comp = C.component(n)
        if comp.is_zero():
            out[n] = 0
            continue
        if n == 1:
            out[1] = comp.dim
            continue
        total = 0
        for key, labels in comp.blocks.items():
            mats = [C.delta(p, n - p).block(*key) for p in range(1, n)]
            mats = [m for m in mats if not m.is_zero()]
            if mats:
                total += len(labels) - rank(vstack(mats), C.base.field)
            else:
                total += len(labels)
        out[n] = total
    return out


def indecomposable_dims(A: GradedRing) -> dict:
    'n -> dim (QA)_n = dim A^n minus the joint image of all mu^{p,q}, p, q >= 1.'
    out = {}
    for n in range(1, A.top_degree + 1):
        comp = A.component(n)
        if comp.is_zero():
            out[n] = 0
            continue
        if n == 1:
            out[1] = comp.dim
            continue
        total = 0
        for key, labels in comp.blocks.items():
            mats = [A.mu(p, n - p).block(*key) for p in range(1, n)]
            mats = [m for m in mats if not m.is_zero()]
            if mats:
                total += len(labels) - rank(hstack(mats), A.base.field)
            else:
                total += len(labels)
        out[n] = total
    return out


# ---------------------------------------------------------------------------
# quadratic constructions
# ---------------------------------------------------------------------------

class QuadraticData:
    'A degree-1 bimodule V together with a sub-bimodule W of V (x) V.'

    def __init__(self, V: Bimodule, W: SubBimodule):
        if W.ambient != tensor(V, V):
            raise StructureError('W must be a sub-bimodule of V (x) V')
        self.V = V
        self.W = W


def _embedded_generators(V: Bimodule, W: SubBimodule, n: int, i: int) -> dict:
    """Spanning vectors of V^(i-1) (x) W (x) V^(n-i-1) inside V^(n).

    Returns {block_key: [column dict over the flat word basis of V^(n)]}.
    """
    amb = tensor_power(V, n)
    wlabels_of = W.ambient.blocks
    out = {}
    prefixes = tensor_power(V, i - 1)
    suffixes = tensor_power(V, n - i - 1)
    for (ps, pt), plabels in prefixes.blocks.items():
        for pl in plabels:
            pword = () if i == 1 else _as_word(pl, i - 1)
            for wkey, wsub in W.parts.items():
                if wkey[0] != pt:
                    continue
                wlabels = wlabels_of[wkey]
                for col in wsub.basis.columns():
                    for (ss, st), slabels in suffixes.blocks.items():
                        if ss != wkey[1]:
                            continue
                        for sl in slabels:
                            sword = () if i == n - 1 else _as_word(sl, n - i - 1)
                            key = (ps, st)
                            vec = {}
                            for idx, c in col.items():
                                a, b = wlabels[idx]
                                word = pword + (a, b) + sword
                                vec[amb.index_of(key, _word_label(word, n))] = c
                            out.setdefault(key, []).append(vec)
    return out


def ideal_component_span(V: Bimodule, W: SubBimodule, n: int) -> dict:
    'The degree-n piece of the two-sided ideal <W>, one Subspace per block.'
    amb = tensor_power(V, n)
    field = V.base.field
    gens = {}
    for i in range(1, n):
        for key, vecs in _embedded_generators(V, W, n, i).items():
            gens.setdefault(key, []).extend(vecs)
    return {key: Subspace.from_spanning(vecs, amb.block_dim(*key), field)
            for key, vecs in gens.items()}


def intersection_component(V: Bimodule, W: SubBimodule, n: int) -> SubBimodule:
    '{V,W}_n = the intersection over i of V^(i-1) (x) W (x) V^(n-i-1) in V^(n).'
    assert n >= 2
    amb = tensor_power(V, n)
    field = V.base.field
    per_position = [_embedded_generators(V, W, n, i) for i in range(1, n)]
    parts = {}
    for key, labels in amb.blocks.items():
        terms = [Subspace.from_spanning(gens.get(key, []), len(labels), field)
                 for gens in per_position]
        parts[key] = intersect(terms, field)
    return SubBimodule(amb, parts)


def quadratic_ring_of(data: QuadraticData, top: int) -> GradedRing:
    """The quadratic ring <V, W>: the tensor ring of V modulo the ideal on W.

    Degree-n components are represented on the complement monomials left
    over after echelon reduction of the ideal (the non-pivot words in the
    word order of the flat basis).  Multiplication concatenates words and
    reduces modulo the ideal.  The flat-word projections are kept on the
    result as `projections`.
    """
    V, W = data.V, data.W
    base = V.base
    field = base.field
    components = {0: unit_bimodule(base), 1: V}
    reducers = {}
    for n in range(2, top + 1):
        amb = tensor_power(V, n)
        span = ideal_component_span(V, W, n)
        blocks = {}
        for key, labels in amb.blocks.items():
            sub = span.get(key)
            if sub is None or sub.dim == 0:
                blocks[key] = labels
                continue
            pivot_cols = {min(r) for r in sub._row_echelon()}
            kept = tuple(l for i, l in enumerate(labels) if i not in pivot_cols)
            if kept:
                blocks[key] = kept
        components[n] = Bimodule(base, blocks)
        reducers[n] = span

    def reduce_word(n, key, word):
        'Image of a degree-n word in the complement basis: [(label, coeff)].'
        amb = tensor_power(V, n)
        sub = reducers[n].get(key)
        label = _word_label(word, n)
        if sub is None:
            return [(label, 1)]
        residual = sub.reduce_vector({amb.index_of(key, label): field.one})
        labels = amb.blocks[key]
        return [(labels[i], c) for i, c in residual.items()]

    mult = {}
    for p in range(1, top):
        for q in range(1, top + 1 - p):
            Qp, Qq = components[p], components[q]
            if Qp.is_zero() or Qq.is_zero() or components[p + q].is_zero():
                continue

            def action(key, l, p=p, q=q):
                word = _as_word(l[0], p) + _as_word(l[1], q)
                return reduce_word(p + q, key, word)

            mult[(p, q)] = BimoduleMap.from_basis_action(
                tensor(Qp, Qq), components[p + q], action)

    ring = GradedRing(base, components, mult, top)
    projections = {1: BimoduleMap.identity(V)}
    for n in range(2, top + 1):
        projections[n] = BimoduleMap.from_basis_action(
            tensor_power(V, n), components[n],
            lambda key, l, n=n: reduce_word(n, key, _as_word(l, n)))
    ring.projections = projections
    ring.presentation = data
    return ring


def quadratic_coring_of(data: QuadraticData, top: int) -> GradedCoring:
    """The quadratic coring {V, W}: the largest subcoring of the tensor
    coalgebra of V whose weight-2 part lies in W.

    Components carry synthetic labels ('w', n, s, t, i); the embeddings into
    the flat word spaces V^(n) are kept on the result as `embeddings`.
    """
    V, W = data.V, data.W
    base = V.base
    field = base.field
    components = {0: unit_bimodule(base), 1: V}
    embeddings = {1: BimoduleMap.identity(V)}
    for n in range(2, top + 1):
        inter = intersection_component(V, W, n)
        blocks = {}
        emb_blocks = {}
        for key, sub in inter.parts.items():
            blocks[key] = tuple(('w', n) + key + (i,) for i in range(sub.dim))
            emb_blocks[key] = sub.basis
        comp = Bimodule(base, blocks)
        components[n] = comp
        embeddings[n] = BimoduleMap(comp, tensor_power(V, n), emb_blocks)

    comult = {}
    for n in range(2, top + 1):
        comp = components[n]
        if comp.is_zero():
            continue
        ambn = tensor_power(V, n)
        for p in range(1, n):
            q = n - p
            Cp, Cq = components[p], components[q]
            tgt = tensor(Cp, Cq)
            ambp, ambq = tensor_power(V, p), tensor_power(V, q)
            blocks = {}
            for key, labels in comp.blocks.items():
                # embed every pair of lower-weight basis vectors by word
                # concatenation, then express each embedded basis vector of
                # weight n in that spanning set (the cut at p is the identity
                # on flat word coordinates)
                cols = []
                pair_index = []
                for (s, t), plabels in Cp.blocks.items():
                    if s != key[0]:
                        continue
                    pmat = embeddings[p].blocks.get((s, t))
                    for (t2, u), qlabels in Cq.blocks.items():
                        if t2 != t or u != key[1]:
                            continue
                        qmat = embeddings[q].blocks.get((t2, u))
                        for pi, plab in enumerate(plabels):
                            pcol = pmat.column(pi)
                            for qi, qlab in enumerate(qlabels):
                                qcol = qmat.column(qi)
                                vec = {}
                                for ip, cp in pcol.items():
                                    pword = _as_word(ambp.blocks[(s, t)][ip], p)
                                    for iq, cq in qcol.items():
                                        qword = _as_word(ambq.blocks[(t2, u)][iq], q)
                                        widx = ambn.index_of(key, _word_label(pword + qword, n))
                                        vec[widx] = field.add(
                                            vec.get(widx, field.zero),
                                            field.mul(field.coerce(cp), field.coerce(cq)))
                                cols.append({k: v for k, v in vec.items()
                                             if not field.is_zero(v)})
                                pair_index.append((plab, qlab))
                trips = []
                for j in range(len(labels)):
                    ecol = embeddings[n].blocks[key].column(j)
                    coords = solve_columns(cols, ecol, ambn.block_dim(*key), field)
                    assert coords is not None, \
                        'deconcatenation cut left the subcoring'
                    for idx, c in enumerate(coords):
                        if field.is_zero(c):
                            continue
                        trips.append((tgt.index_of(key, pair_index[idx]), j, c))
                mat = SparseMatrix(tgt.block_dim(*key), len(labels), trips)
                if not mat.is_zero():
                    blocks[key] = mat
            comult[(p, q)] = BimoduleMap(comp, tgt, blocks)

    coring = GradedCoring(base, components, comult, top)
    coring.embeddings = embeddings
    coring.presentation = data
    return coring


# ---------------------------------------------------------------------------
# shriek duals
# ---------------------------------------------------------------------------

def _support_bound(probe, cap: int):
    """Largest n <= cap with probe(n) nonzero, plus a truncation flag.

    Both quadratic constructions vanish permanently past their first zero
    weight, so scanning up to the first zero is a complete answer; the flag
    records the (rare) case where the scan hit the cap while still nonzero.

    The callers pick cap >= number of idempotents, which makes the flag
    reachable only for a non-nilpotent degree-1 part: when the block
    digraph of V is acyclic every path revisits no idempotent, so V^(n)
    dies by n = |S| and the scan ends at a genuine zero before the cap.
    """
    top = 1
    for n in range(2, cap + 1):
        if probe(n):
            top = n
        else:
            return top, False
    return top, probe(cap + 1) > 0


def shriek_of_ring(A: GradedRing, top: int = None) -> GradedCoring:
    'A^! = {A^1, Ker mu^{1,1}}, the quadratic-dual coring of A.'
    V = A.component(1)
    W = kernel_sub(A.mu(1, 1))
    data = QuadraticData(V, W)
    truncated = False
    if top is None:
        cap = max(2 * A.top_degree, len(A.base.idempotents), 2)
        top, truncated = _support_bound(
            lambda n: intersection_component(V, W, n).dim, cap)
        if V.is_zero():
            top = 0
    coring = quadratic_coring_of(data, top)
    coring.support_truncated = truncated
    return coring


def shriek_of_coring(C: GradedCoring, top: int = None) -> GradedRing:
    'C^! = <C_1, Im Delta_{1,1}>, the quadratic-dual ring of C.'
    V = C.component(1)
    W = image_sub(C.delta(1, 1))
    data = QuadraticData(V, W)
    truncated = False
    if top is None:
        cap = max(2 * C.top_degree, len(C.base.idempotents), 2)

        def probe(n):
            amb = tensor_power(V, n)
            if amb.dim == 0:
                return 0
            span = ideal_component_span(V, W, n)
            return amb.dim - sum(s.dim for s in span.values())

        top, truncated = _support_bound(probe, cap)
        if V.is_zero():
            top = 0
    ring = quadratic_ring_of(data, top)
    ring.support_truncated = truncated
    return ring


# ---------------------------------------------------------------------------
# truncations and products
# ---------------------------------------------------------------------------

def truncate_ring(A: GradedRing, m: int) -> GradedRing:
    'A / A^{>= m}: keep degrees below m, higher products become zero.'
    assert m >= 1
    top = min(m - 1, A.top_degree)
    comps = {n: A.component(n) for n in range(top + 1)}
    mult = {(p, q): f for (p, q), f in A.mult.items() if p + q <= top}
    return GradedRing(A.base, comps, mult, top, validate=False)


def truncate_coring(C: GradedCoring, m: int) -> GradedCoring:
    'C_{< m}: the subcoring of components in degrees below m.'
    assert m >= 1
    top = min(m - 1, C.top_degree)
    comps = {n: C.component(n) for n in range(top + 1)}
    comult = {(p, q): f for (p, q), f in C.comult.items() if p + q <= top}
    return GradedCoring(C.base, comps, comult, top, validate=False)


def _merged_base(b1: BaseRing, b2: BaseRing) -> BaseRing:
    if b1.field != b2.field:
        raise StructureError('direct product factors use different fields')
    overlap = set(b1.idempotents) & set(b2.idempotents)
    if overlap:
        raise StructureError(
            f'idempotent label collision: {sorted(map(repr, overlap))}')
    return BaseRing(b1.idempotents + b2.idempotents, b1.field)


def _merged_component(base, X: Bimodule, Y: Bimodule) -> Bimodule:
    blocks = dict(X.blocks)
    blocks.update(Y.blocks)
    return Bimodule(base, blocks)


def direct_product(A: GradedRing, B: GradedRing) -> GradedRing:
    """A x B over k^{S + S'}: componentwise sums, no cross terms.

    Block matrices carry over unchanged because tensor blocks between
    idempotents of one factor never pick up middle terms from the other.
    """
    base = _merged_base(A.base, B.base)
    top = max(A.top_degree, B.top_degree)
    comps = {n: _merged_component(base, A.component(n), B.component(n))
             for n in range(top + 1)}
    mult = {}
    for p in range(1, top):
        for q in range(1, top + 1 - p):
            blocks = {}
            for f in (A.mult.get((p, q)), B.mult.get((p, q))):
                if f is not None:
                    blocks.update(f.blocks)
            if blocks:
                mult[(p, q)] = BimoduleMap(tensor(comps[p], comps[q]),
                                           comps[p + q], blocks)
    return GradedRing(base, comps, mult, top)


def direct_sum_corings(C: GradedCoring, D: GradedCoring) -> GradedCoring:
    'C + D over the merged base: blockwise comultiplication, no cross terms.'
    base = _merged_base(C.base, D.base)
    top = max(C.top_degree, D.top_degree)
    comps = {n: _merged_component(base, C.component(n), D.component(n))
             for n in range(top + 1)}
    comult = {}
    for p in range(1, top):
        for q in range(1, top + 1 - p):
            blocks = {}
            for f in (C.comult.get((p, q)), D.comult.get((p, q))):
                if f is not None:
                    blocks.update(f.blocks)
            if blocks:
                comult[(p, q)] = BimoduleMap(comps[p + q],
                                             tensor(comps[p], comps[q]), blocks)
    return GradedCoring(base, comps, comult, top)

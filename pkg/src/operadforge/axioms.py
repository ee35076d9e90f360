"""Axiom checkers for modular, odd modular, and Markl operad tables.

Structures are explicit finite tables: graded components indexed by
(number of legs, genus) — or by arity alone for Markl tables — with
symmetric-group action matrices and composition/contraction matrices
over the rationals.  Legs are skeletal ({1..n}); composing at legs
(a, b) relabels the surviving legs order-preservingly, first factor
first, and contracting at {u, v} does the same.  Every axiom is
evaluated pointwise as an exact matrix identity; an instance whose
target component is missing from the table is reported as skipped,
never silently passed.

Odd tables have degree +1 compositions and contractions, which makes
the Koszul bookkeeping observable: applying an operation in the second
tensor slot picks up the sign of the first slot's degree.

The suspension transform toggles parity.  It twists each component by
a determinant line with one odd letter per leg, one per genus, and a
single degree -1 marker, so the component degrees shift by
legs + genus - 1, the action picks up the sign character, and the
composition signs are letter-rearrangement parities times a Koszul
diagonal.  Verdicts are preserved axiom for axiom — on composition-only
tables, the only domain where such a twist can exist (see `suspend`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import RationalMatrix

EVEN, ODD, MARKL = "even", "odd", "markl"


# -- tables -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteModularModule:
    """Graded components with exact symmetric-group actions.

    degrees[(n, g)] lists each basis vector's degree; action[(n, g)]
    maps every permutation of {1..n} (as a tuple of images, 1-based) to
    its matrix, acting on the right: row basis vector i of x.perm is
    built from slots x[perm[j]].
    """

    degrees: dict = field(repr=False)    # (n, g) -> tuple of ints
    action: dict = field(repr=False)     # (n, g) -> {perm: RationalMatrix}

    def dim(self, key) -> int:
        return len(self.degrees[key])

    def has(self, key) -> bool:
        return key in self.degrees

    def check_group_law(self) -> bool:
        for key, table in self.action.items():
            n = key[0]
            idp = tuple(range(1, n + 1))
            if set(table) != set(itertools.permutations(idp)):
                return False
            if table[idp].entries != RationalMatrix.identity(
                    self.dim(key)).entries:
                return False
            for p in table:
                for q in table:
                    pq = tuple(p[q[i] - 1] for i in range(n))
                    if _matmul(table[q], table[p]).entries != \
                            table[pq].entries:
                        return False
        return True


@dataclass(frozen=True, eq=False)
class FiniteOperadTable:
    """A modular-type or Markl-type operad presented by matrices.

    For parity "even"/"odd": comp[((m,g1), a, (n,g2), b)] composes leg a
    of the first factor with leg b of the second, contr[((n,g), u, v)]
    (u < v) contracts two legs.  For parity "markl": comp_i[(m, n, i)]
    is the i-th partial composition and keys of the module are plain
    arities (n,).
    """

    module: FiniteModularModule
    parity: str
    comp: dict = field(default_factory=dict, repr=False)
    contr: dict = field(default_factory=dict, repr=False)
    comp_i: dict = field(default_factory=dict, repr=False)


def _matmul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    assert a.cols == b.rows
    entries = {}
    for j in range(b.cols):
        col = a.apply(b.col(j))
        for r, v in col.items():
            if v:
                entries[(r, j)] = v
    return RationalMatrix(a.rows, b.cols, entries)


def _kron(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    entries = {}
    for (ra, ca), va in a.entries.items():
        for (rb, cb), vb in b.entries.items():
            entries[(ra * b.rows + rb, ca * b.cols + cb)] = va * vb
    return RationalMatrix(a.rows * b.rows, a.cols * b.cols, entries)


def _diag(signs) -> RationalMatrix:
    signs = list(signs)
    return RationalMatrix(len(signs), len(signs),
                          {(i, i): Fraction(s) for i, s in enumerate(signs)})


def _tau(deg1, deg2) -> RationalMatrix:
    """Graded flip V1 (x) V2 -> V2 (x) V1."""
    n1, n2 = len(deg1), len(deg2)
    entries = {}
    for i in range(n1):
        for j in range(n2):
            s = -1 if (deg1[i] % 2) and (deg2[j] % 2) else 1
            entries[(j * n1 + i, i * n2 + j)] = Fraction(s)
    return RationalMatrix(n1 * n2, n1 * n2, entries)


def _drop(label: int, removed) -> int:
    """Skeletal relabel of a surviving leg after removing some legs."""
    assert label not in removed
    return label - sum(1 for r in removed if r < label)


# -- axiom engine -------------------------------------------------------------

def _report_entry():
    return {"status": "pass", "checked": 0, "skipped": 0, "witness": None}


def _record(entry, ok, witness):
    entry["checked"] += 1
    if not ok and entry["status"] != "fail":
        entry["status"] = "fail"
        entry["witness"] = witness


def _skip(entry):
    entry["skipped"] += 1


def _finish(report):
    for entry in report.values():
        if entry["status"] == "pass" and entry["checked"] == 0:
            entry["status"] = "skipped"
    return report


def _comp_keys(t):
    return sorted(t.comp)


def _inv(perm):
    out = [0] * len(perm)
    for i, p in enumerate(perm):
        out[p - 1] = i + 1
    return tuple(out)


def _check_modular_family(t: FiniteOperadTable, odd: bool,
                          only=None) -> dict:
    assert t.parity == (ODD if odd else EVEN), \
        "parity flag does not match the requested checker"
    mod = t.module
    assert mod.check_group_law(), "malformed table: broken group action"
    flip = Fraction(-1) if odd else Fraction(1)
    names = ("comp_equivariance", "contr_equivariance", "comp_symmetry",
             "comp_sequential", "contr_commute", "contr_vs_comp",
             "comp_after_contr")
    report = {name: _report_entry() for name in names}

    def want(name):
        assert name in names
        return only is None or name in only

    # (i) equivariance of compositions
    entry = report["comp_equivariance"]
    for (ka, a, kb, b), c in (t.comp.items()
                              if want("comp_equivariance") else ()):
        (m, g1), (n, g2) = ka, kb
        kt = (m + n - 2, g1 + g2)
        for rho in itertools.permutations(range(1, m + 1)):
            for sigma in itertools.permutations(range(1, n + 1)):
                key2 = (ka, rho[a - 1], kb, sigma[b - 1])
                if key2 not in t.comp:
                    _skip(entry)
                    continue
                induced = [0] * (m + n - 2)
                for j in range(1, m + 1):
                    if j != a:
                        induced[_drop(j, (a,)) - 1] = \
                            _drop(rho[j - 1], (rho[a - 1],))
                for j in range(1, n + 1):
                    if j != b:
                        induced[m - 1 + _drop(j, (b,)) - 1] = \
                            m - 1 + _drop(sigma[j - 1], (sigma[b - 1],))
                # stored matrices act on the right, the axiom applies
                # the functor, so look up inverses
                lhs = _matmul(mod.action[kt][_inv(tuple(induced))], c)
                rhs = _matmul(t.comp[key2],
                              _kron(mod.action[ka][_inv(rho)],
                                    mod.action[kb][_inv(sigma)]))
                _record(entry, lhs.entries == rhs.entries,
                        (ka, a, kb, b, rho, sigma))

    # (ii) equivariance of contractions
    entry = report["contr_equivariance"]
    for (k, u, v), c in (t.contr.items()
                         if want("contr_equivariance") else ()):
        n, g = k
        kt = (n - 2, g + 1)
        for rho in itertools.permutations(range(1, n + 1)):
            uu, vv = sorted((rho[u - 1], rho[v - 1]))
            if (k, uu, vv) not in t.contr:
                _skip(entry)
                continue
            induced = [0] * (n - 2)
            for j in range(1, n + 1):
                if j not in (u, v):
                    induced[_drop(j, (u, v)) - 1] = \
                        _drop(rho[j - 1], (uu, vv))
            lhs = _matmul(mod.action[kt][_inv(tuple(induced))], c)
            rhs = _matmul(t.contr[(k, uu, vv)], mod.action[k][_inv(rho)])
            _record(entry, lhs.entries == rhs.entries, (k, u, v, rho))

    # (iii) comp at (a,b) equals comp at (b,a) after the graded flip;
    # the flipped side lists the second factor's legs first, so its
    # result comes back through the block-swap action.
    entry = report["comp_symmetry"]
    for (ka, a, kb, b), c in (t.comp.items()
                              if want("comp_symmetry") else ()):
        key2 = (kb, b, ka, a)
        if key2 not in t.comp:
            _skip(entry)
            continue
        (m, g1), (n, g2) = ka, kb
        kt = (m + n - 2, g1 + g2)
        swap = tuple(range(n, m + n - 1)) + tuple(range(1, n))
        rhs = _matmul(mod.action[kt][swap],
                      _matmul(t.comp[key2],
                              _tau(mod.degrees[ka], mod.degrees[kb])))
        _record(entry, c.entries == rhs.entries, (ka, a, kb, b))

    # (iv) sequential compositions agree (odd: anti-agree)
    entry = report["comp_sequential"]
    for (kb, c_leg, kc, d), inner in (t.comp.items()
                                      if want("comp_sequential") else ()):
        (n2, g2), (n3, g3) = kb, kc
        kbc = (n2 + n3 - 2, g2 + g3)
        for (ka, a, kb2, b), _ in list(t.comp.items()):
            if kb2 != kb or b == c_leg:
                continue
            (m, g1) = ka
            b_in = _drop(b, (c_leg,))
            key_out_l = (ka, a, kbc, b_in)
            kab = (m + n2 - 2, g1 + g2)
            c_in = (m - 1) + _drop(c_leg, (b,))
            key_out_r = (kab, c_in, kc, d)
            if key_out_l not in t.comp or key_out_r not in t.comp:
                _skip(entry)
                continue
            da = mod.degrees[ka]
            pass_sign = _diag(
                -1 if odd and (dx % 2) else 1
                for dx in da
                for _ in range(mod.dim(kb) * mod.dim(kc)))
            lhs = _matmul(t.comp[key_out_l],
                          _matmul(_kron(RationalMatrix.identity(mod.dim(ka)),
                                        inner), pass_sign))
            rhs = _matmul(t.comp[key_out_r],
                          _kron(t.comp[(ka, a, kb, b)],
                                RationalMatrix.identity(mod.dim(kc))))
            rhs = RationalMatrix(rhs.rows, rhs.cols,
                                 {rc: flip * x
                                  for rc, x in rhs.entries.items()})
            _record(entry, lhs.entries == rhs.entries,
                    (ka, a, kb, b, c_leg, kc, d))

    # (v) contractions commute (odd: anticommute)
    entry = report["contr_commute"]
    for (k, a, b), first in (t.contr.items()
                             if want("contr_commute") else ()):
        n, g = k
        kt = (n - 2, g + 1)
        for (k2, c, d), _ in list(t.contr.items()):
            if k2 != k or {c, d} & {a, b}:
                continue
            cc, dd = _drop(c, (a, b)), _drop(d, (a, b))
            aa, bb = _drop(a, (c, d)), _drop(b, (c, d))
            if (kt, cc, dd) not in t.contr or (kt, aa, bb) not in t.contr:
                _skip(entry)
                continue
            lhs = _matmul(t.contr[(kt, cc, dd)], first)
            rhs = _matmul(t.contr[(kt, aa, bb)], t.contr[(k, c, d)])
            rhs = RationalMatrix(rhs.rows, rhs.cols,
                                 {rc: flip * x
                                  for rc, x in rhs.entries.items()})
            _record(entry, lhs.entries == rhs.entries, (k, a, b, c, d))

    # (vi) contracting across a composition, both ways
    entry = report["contr_vs_comp"]
    for (ka, c_leg, kb, d), comp_cd in (t.comp.items()
                                        if want("contr_vs_comp") else ()):
        (m, g1), (n, g2) = ka, kb
        kt = (m + n - 2, g1 + g2)
        for a in range(1, m + 1):
            if a == c_leg:
                continue
            for b in range(1, n + 1):
                if b == d:
                    continue
                key_ab = (ka, a, kb, b)
                if key_ab not in t.comp:
                    _skip(entry)
                    continue
                a_t = _drop(a, (c_leg,))
                b_t = (m - 1) + _drop(b, (d,))
                c_t = _drop(c_leg, (a,))
                d_t = (m - 1) + _drop(d, (b,))
                k_ab = (kt, *sorted((a_t, b_t)))
                k_cd = (kt, *sorted((c_t, d_t)))
                if k_ab not in t.contr or k_cd not in t.contr:
                    _skip(entry)
                    continue
                lhs = _matmul(t.contr[k_ab], comp_cd)
                rhs = _matmul(t.contr[k_cd], t.comp[key_ab])
                rhs = RationalMatrix(rhs.rows, rhs.cols,
                                     {rc: flip * x
                                      for rc, x in rhs.entries.items()})
                _record(entry, lhs.entries == rhs.entries,
                        (ka, a, kb, b, c_leg, d))

    # (vii) composing after contracting the first factor
    entry = report["comp_after_contr"]
    for (k, u, v), contr_uv in (t.contr.items()
                                if want("comp_after_contr") else ()):
        (m, g1) = k
        ka = (m - 2, g1 + 1)
        for (ka2, a, kb, b), comp_ab in list(t.comp.items()):
            if ka2 != k or a in (u, v):
                continue
            a_c = _drop(a, (u, v))
            key_l = (ka, a_c, kb, b)
            (n, g2) = kb
            kt = (m + n - 2, g1 + g2)
            u_t, v_t = _drop(u, (a,)), _drop(v, (a,))
            key_r = (kt, *sorted((u_t, v_t)))
            if key_l not in t.comp or key_r not in t.contr:
                _skip(entry)
                continue
            lhs = _matmul(t.comp[key_l],
                          _kron(contr_uv,
                                RationalMatrix.identity(mod.dim(kb))))
            rhs = _matmul(t.contr[key_r], comp_ab)
            rhs = RationalMatrix(rhs.rows, rhs.cols,
                                 {rc: flip * x
                                  for rc, x in rhs.entries.items()})
            _record(entry, lhs.entries == rhs.entries, (k, u, v, a, kb, b))

    return _finish(report)


def check_modular(t: FiniteOperadTable, only=None) -> dict:
    """Even axioms; per-axiom status with a witness on first failure.

    `only` restricts the run to the named axioms (the rest report as
    skipped); mutation scans use it to try cheap axioms first.
    """
    return _check_modular_family(t, odd=False, only=only)


def check_odd_modular(t: FiniteOperadTable, only=None) -> dict:
    """Degree +1 axioms with the sign-flipped right-hand sides."""
    return _check_modular_family(t, odd=True, only=only)


def verdicts(report: dict) -> dict:
    return {name: entry["status"] for name, entry in report.items()}


def single_sign_mutations(t: FiniteOperadTable):
    """Yield (label, table) for each sign flip of one stored entry."""
    for table_name in ("comp", "contr", "comp_i"):
        source = getattr(t, table_name)
        for key in sorted(source):
            mat = source[key]
            for rc in sorted(mat.entries):
                entries = dict(mat.entries)
                entries[rc] = -entries[rc]
                mutated = dict(source)
                mutated[key] = RationalMatrix(mat.rows, mat.cols, entries)
                kwargs = {"comp": t.comp, "contr": t.contr,
                          "comp_i": t.comp_i, table_name: mutated}
                yield ("%s[%r]@%r" % (table_name, key, rc),
                       FiniteOperadTable(t.module, t.parity, **kwargs))


def first_failing_axiom(t: FiniteOperadTable):
    """Name and witness of some failing axiom, or None if all pass.

    Tries the cheap axioms before the kron-heavy ones, so scanning all
    single-sign mutations of a table stays fast.
    """
    odd = t.parity == ODD
    tiers = (("comp_symmetry",),
             ("comp_sequential", "contr_vs_comp", "comp_after_contr"),
             None)
    for only in tiers:
        report = _check_modular_family(t, odd=odd, only=only)
        for name, entry in report.items():
            if entry["status"] == "fail":
                return name, entry["witness"]
        if only is None:
            return None


# -- Markl tables -------------------------------------------------------------

def _insert_perm(tau, i, sigma):
    """Insert sigma at the i-th place of tau (both tuples of images)."""
    m, n = len(tau), len(sigma)
    out = [0] * (m + n - 1)

    def widened(j):
        return j + (n - 1 if j > tau[i - 1] else 0)

    for j in range(1, m + 1):
        if j < i:
            out[j - 1] = widened(tau[j - 1])
        elif j > i:
            out[j + n - 2] = widened(tau[j - 1])
    for j in range(1, n + 1):
        out[i - 1 + j - 1] = tau[i - 1] - 1 + sigma[j - 1]
    return tuple(out)


def check_markl(t: FiniteOperadTable) -> dict:
    """Partial-composition axioms: the three-case sequential law and
    equivariance under inserting permutations."""
    assert t.parity == "markl"
    mod = t.module
    assert mod.check_group_law(), "malformed table: broken group action"
    report = {name: _report_entry() for name in
              ("sequential", "equivariance")}

    entry = report["sequential"]
    for (a_ar, b_ar, j), comp_j in t.comp_i.items():
        for (ab_ar, c_ar, i), _ in list(t.comp_i.items()):
            if ab_ar != a_ar + b_ar - 1:
                continue
            outer = t.comp_i[(ab_ar, c_ar, i)]
            lhs = _matmul(outer,
                          _kron(comp_j,
                                RationalMatrix.identity(mod.dim((c_ar,)))))
            if 1 <= i < j:
                need = ((a_ar, c_ar, i), (a_ar + c_ar - 1, b_ar, j + c_ar - 1))
                if need[0] not in t.comp_i or need[1] not in t.comp_i:
                    _skip(entry)
                    continue
                swap = _matmul(
                    _kron(RationalMatrix.identity(mod.dim((a_ar,))),
                          _tau(mod.degrees[(b_ar,)], mod.degrees[(c_ar,)])),
                    RationalMatrix.identity(
                        mod.dim((a_ar,)) * mod.dim((b_ar,))
                        * mod.dim((c_ar,))))
                rhs = _matmul(t.comp_i[need[1]],
                              _kron(t.comp_i[need[0]],
                                    RationalMatrix.identity(
                                        mod.dim((b_ar,)))))
                rhs = _matmul(rhs, swap)
            elif j <= i < b_ar + j:
                need = ((b_ar, c_ar, i - j + 1),
                        (a_ar, b_ar + c_ar - 1, j))
                if need[0] not in t.comp_i or need[1] not in t.comp_i:
                    _skip(entry)
                    continue
                rhs = _matmul(t.comp_i[need[1]],
                              _kron(RationalMatrix.identity(
                                  mod.dim((a_ar,))), t.comp_i[need[0]]))
            else:
                if not (j + b_ar <= i <= a_ar + b_ar - 1):
                    _skip(entry)
                    continue
                need = ((a_ar, c_ar, i - b_ar + 1),
                        (a_ar + c_ar - 1, b_ar, j))
                if need[0] not in t.comp_i or need[1] not in t.comp_i:
                    _skip(entry)
                    continue
                swap = _kron(RationalMatrix.identity(mod.dim((a_ar,))),
                             _tau(mod.degrees[(b_ar,)],
                                  mod.degrees[(c_ar,)]))
                rhs = _matmul(t.comp_i[need[1]],
                              _kron(t.comp_i[need[0]],
                                    RationalMatrix.identity(
                                        mod.dim((b_ar,)))))
                rhs = _matmul(rhs, swap)
            _record(entry, lhs.entries == rhs.entries, (a_ar, b_ar, c_ar,
                                                        j, i))

    entry = report["equivariance"]
    for (m, n, i), comp in t.comp_i.items():
        kt = (m + n - 1,)
        for tau in itertools.permutations(range(1, m + 1)):
            for sigma in itertools.permutations(range(1, n + 1)):
                key2 = (m, n, tau[i - 1])
                if key2 not in t.comp_i:
                    _skip(entry)
                    continue
                lhs = _matmul(comp, _kron(mod.action[(m,)][tau],
                                          mod.action[(n,)][sigma]))
                rhs = _matmul(mod.action[kt][_insert_perm(tau, i, sigma)],
                              t.comp_i[key2])
                _record(entry, lhs.entries == rhs.entries,
                        (m, n, i, tau, sigma))

    return _finish(report)


# -- tensor-pairing tables ----------------------------------------------------

def _word_sign(degrees, order):
    """Koszul sign of rearranging a graded word into the given order.

    order[j] = source position of the letter landing at position j.
    Only pairs of odd letters that cross contribute.
    """
    sign = 1
    for j in range(len(order)):
        for k in range(j + 1, len(order)):
            if order[j] > order[k] and degrees[order[j]] % 2 \
                    and degrees[order[k]] % 2:
                sign = -sign
    return sign


def _perm_matrices(letter_degrees, n):
    """Right Sigma_n action on V^(x)n by permuting slots."""
    basis = list(itertools.product(range(len(letter_degrees)), repeat=n))
    index = {b: i for i, b in enumerate(basis)}
    out = {}
    for rho in itertools.permutations(range(1, n + 1)):
        entries = {}
        for col, b in enumerate(basis):
            moved = tuple(b[rho[j] - 1] for j in range(n))
            degs = [letter_degrees[i] for i in b]
            inv = [rho[j] - 1 for j in range(n)]
            sign = _word_sign({p: degs[p] for p in range(n)}, inv)
            entries[(index[moved], col)] = Fraction(sign)
        out[rho] = RationalMatrix(len(basis), len(basis), entries)
    return out


def pairing_table(letter_degrees, pairing, max_n, max_g,
                  parity) -> FiniteOperadTable:
    """Endomorphism-style table of a graded space with a pairing.

    Components are tensor powers of the space, with one copy per genus
    up to max_g.  Compositions feed leg a of the first factor and leg b
    of the second to the pairing; contractions feed two legs of one
    factor.  For parity "odd" the pairing must drop total degree by 1,
    which is the tabletop model of the determinant twist; for "even" it
    must preserve it.
    """
    r = 1 if parity == ODD else 0
    for (i, j), val in pairing.items():
        assert val == 0 or letter_degrees[i] + letter_degrees[j] == -r, \
            "pairing entries must match the operation degree"
    dim_v = len(letter_degrees)
    bases = {n: list(itertools.product(range(dim_v), repeat=n))
             for n in range(max_n + 1)}
    indexes = {n: {b: i for i, b in enumerate(bs)}
               for n, bs in bases.items()}
    degrees, action = {}, {}
    for n in range(max_n + 1):
        degs = tuple(sum(letter_degrees[i] for i in b) for b in bases[n])
        acts = _perm_matrices(letter_degrees, n)
        for g in range(max_g + 1):
            degrees[(n, g)] = degs
            action[(n, g)] = acts
    module = FiniteModularModule(degrees, action)

    def d(i):
        return letter_degrees[i]

    comp = {}
    for m in range(1, max_n + 1):
        for n in range(1, max_n + 1):
            if m + n - 2 > max_n:
                continue
            for a in range(1, m + 1):
                for b in range(1, n + 1):
                    entries = {}
                    for ix, x in enumerate(bases[m]):
                        for iy, y in enumerate(bases[n]):
                            val = pairing.get((x[a - 1], y[b - 1]), 0)
                            if not val:
                                continue
                            e = (d(x[a - 1]) * sum(d(i) for i in x[a:])
                                 + d(y[b - 1]) * sum(d(i) for i in y[:b - 1])
                                 + r * sum(d(i) for k, i in enumerate(x)
                                           if k != a - 1))
                            tgt = x[:a - 1] + x[a:] + y[:b - 1] + y[b:]
                            row = indexes[m + n - 2][tgt]
                            entries[(row, ix * len(bases[n]) + iy)] = \
                                Fraction(val if e % 2 == 0 else -val)
                    mat = RationalMatrix(len(bases[m + n - 2]),
                                         len(bases[m]) * len(bases[n]),
                                         entries)
                    for g1 in range(max_g + 1):
                        for g2 in range(max_g + 1 - g1):
                            comp[((m, g1), a, (n, g2), b)] = mat

    contr = {}
    for n in range(2, max_n + 1):
        for u in range(1, n + 1):
            for v in range(u + 1, n + 1):
                entries = {}
                for ix, x in enumerate(bases[n]):
                    val = pairing.get((x[u - 1], x[v - 1]), 0)
                    if not val:
                        continue
                    e = (d(x[u - 1]) * sum(d(i) for i in x[:u - 1])
                         + d(x[v - 1]) * sum(d(i) for k, i in enumerate(x)
                                             if k < v - 1 and k != u - 1))
                    tgt = tuple(i for k, i in enumerate(x)
                                if k not in (u - 1, v - 1))
                    entries[(indexes[n - 2][tgt], ix)] = \
                        Fraction(val if e % 2 == 0 else -val)
                mat = RationalMatrix(len(bases[n - 2]), len(bases[n]),
                                     entries)
                for g in range(max_g):
                    contr[((n, g), u, v)] = mat

    return FiniteOperadTable(module, parity, comp, contr)


def terminal_table(max_n=3, max_g=1) -> FiniteOperadTable:
    """Every component one-dimensional in degree zero, every map 1."""
    return pairing_table([0], {(0, 0): 1}, max_n, max_g, EVEN)


def det_table(max_n=3, max_g=1) -> FiniteOperadTable:
    """The shipped odd fixture: two letters paired with degree +1.

    This is the smallest faithful model of composing and contracting
    determinant lines; all seven degree +1 axioms hold, and reading the
    same table through the even checker breaks the sequential axiom.
    """
    return pairing_table([0, -1], {(0, 1): 1, (1, 0): 1}, max_n, max_g, ODD)


def associative_table(max_n=3) -> FiniteOperadTable:
    """Arity-indexed scalars with every partial composition 1."""
    degrees = {(n,): (0,) for n in range(1, max_n + 1)}
    action = {(n,): {rho: RationalMatrix.identity(1)
                     for rho in itertools.permutations(range(1, n + 1))}
              for n in range(1, max_n + 1)}
    one = RationalMatrix.identity(1)
    comp_i = {(m, n, i): one
              for m in range(1, max_n + 1)
              for n in range(1, max_n + 1)
              if m + n - 1 <= max_n
              for i in range(1, m + 1)}
    return FiniteOperadTable(FiniteModularModule(degrees, action),
                             "markl", comp_i=comp_i)


def endomorphism_markl_table(letter_degrees, max_n=2) -> FiniteOperadTable:
    """Maps V^(x)n -> V with substitution composition.

    Basis of the arity-n component: (output letter, input letters);
    f o_i g substitutes g into input i when g's output letter matches,
    with the Koszul sign of moving g's inputs into place.
    """
    dim_v = len(letter_degrees)
    bases = {n: [(o,) + ins
                 for o in range(dim_v)
                 for ins in itertools.product(range(dim_v), repeat=n)]
             for n in range(1, max_n + 1)}
    indexes = {n: {b: i for i, b in enumerate(bs)}
               for n, bs in bases.items()}

    def hom_degree(b):
        return sum(letter_degrees[i] for i in b[1:]) - letter_degrees[b[0]]

    degrees = {(n,): tuple(-hom_degree(b) for b in bases[n])
               for n in bases}
    action = {}
    for n in bases:
        table = {}
        for rho in itertools.permutations(range(1, n + 1)):
            entries = {}
            for col, b in enumerate(bases[n]):
                moved = (b[0],) + tuple(b[rho[j]] for j in range(n))
                degs = {p: letter_degrees[b[1 + p]] for p in range(n)}
                sign = _word_sign(degs, [rho[j] - 1 for j in range(n)])
                entries[(indexes[n][moved], col)] = Fraction(sign)
            table[rho] = RationalMatrix(len(bases[n]), len(bases[n]),
                                        entries)
        action[(n,)] = table
    comp_i = {}
    for m in bases:
        for n in bases:
            if m + n - 1 not in bases:
                continue
            for i in range(1, m + 1):
                entries = {}
                for ix, f in enumerate(bases[m]):
                    for iy, g in enumerate(bases[n]):
                        if f[i] != g[0]:
                            continue
                        hom_g = letter_degrees[g[0]] \
                            - sum(letter_degrees[j] for j in g[1:])
                        e = hom_g * sum(letter_degrees[j]
                                        for j in f[1:i])
                        tgt = (f[0],) + f[1:i] + g[1:] + f[1 + i:]
                        entries[(indexes[m + n - 1][tgt],
                                 ix * len(bases[n]) + iy)] = \
                            Fraction(1 if e % 2 == 0 else -1)
                comp_i[(m, n, i)] = RationalMatrix(
                    len(bases[m + n - 1]), len(bases[m]) * len(bases[n]),
                    entries)
    return FiniteOperadTable(FiniteModularModule(degrees, action),
                             "markl", comp_i=comp_i)


# -- table serialization -------------------------------------------------------

def _num_out(x: Fraction):
    if x.denominator == 1:
        return int(x)
    return "%d/%d" % (x.numerator, x.denominator)


def _mat_out(mat: RationalMatrix) -> dict:
    return {"rows": mat.rows, "cols": mat.cols,
            "entries": [[r, c, _num_out(x)]
                        for (r, c), x in sorted(mat.entries.items())]}


def _mat_in(d: dict) -> RationalMatrix:
    return RationalMatrix(d["rows"], d["cols"],
                          {(r, c): Fraction(str(v))
                           for r, c, v in d["entries"]})


def table_to_dict(t: FiniteOperadTable) -> dict:
    """JSON-ready form: components with degree labels, group-action
    matrices, and operation matrices indexed by (a, b) / (u, v) / i."""
    mod = t.module
    return {
        "parity": t.parity,
        "components": [{"key": list(k), "degrees": list(degs)}
                       for k, degs in sorted(mod.degrees.items())],
        "action": [{"key": list(k), "perm": list(p),
                    "matrix": _mat_out(mod.action[k][p])}
                   for k in sorted(mod.action)
                   for p in sorted(mod.action[k])],
        "comp": [{"first": list(ka), "a": a, "second": list(kb), "b": b,
                  "matrix": _mat_out(mat)}
                 for (ka, a, kb, b), mat in sorted(t.comp.items())],
        "contr": [{"key": list(k), "u": u, "v": v, "matrix": _mat_out(mat)}
                  for (k, u, v), mat in sorted(t.contr.items())],
        "comp_i": [{"outer": m, "inner": n, "slot": i,
                    "matrix": _mat_out(mat)}
                   for (m, n, i), mat in sorted(t.comp_i.items())],
    }


def table_from_dict(d: dict) -> FiniteOperadTable:
    parity = d["parity"]
    assert parity in (EVEN, ODD, MARKL), "unknown parity %r" % (parity,)
    degrees = {tuple(c["key"]): tuple(c["degrees"])
               for c in d["components"]}
    action: dict = {}
    for row in d["action"]:
        key = tuple(row["key"])
        assert key in degrees, "action at undeclared component %r" % (key,)
        action.setdefault(key, {})[tuple(row["perm"])] = \
            _mat_in(row["matrix"])
    comp = {(tuple(c["first"]), c["a"], tuple(c["second"]), c["b"]):
            _mat_in(c["matrix"]) for c in d["comp"]}
    contr = {(tuple(c["key"]), c["u"], c["v"]): _mat_in(c["matrix"])
             for c in d["contr"]}
    comp_i = {(c["outer"], c["inner"], c["slot"]): _mat_in(c["matrix"])
              for c in d["comp_i"]}
    return FiniteOperadTable(FiniteModularModule(degrees, action),
                             parity, comp, contr, comp_i)


# -- suspension ---------------------------------------------------------------

def _shift(key) -> int:
    n, g = key
    return n + g - 1


def _rearrange_comp(m, g1, a, n, g2, b) -> int:
    """Parity of sorting the two det-line letter blocks into the target
    block with the consumed letters (leg a, leg b, one down marker)
    parked at the end."""
    e_a = [("ea", j) for j in range(1, m + 1)]
    e_b = [("eb", j) for j in range(1, n + 1)]
    g_a = [("ga", j) for j in range(g1)]
    g_b = [("gb", j) for j in range(g2)]
    src = e_a + g_a + [("da", 0)] + e_b + g_b + [("db", 0)]
    tgt = ([x for x in e_a if x[1] != a] + [x for x in e_b if x[1] != b]
           + g_a + g_b + [("da", 0)]
           + [("ea", a), ("eb", b), ("db", 0)])
    pos = {x: i for i, x in enumerate(src)}
    order = [pos[x] for x in tgt]
    return _word_sign({i: 1 for i in range(len(src))}, order)


def _perm_sgn(rho) -> int:
    sign = 1
    for i in range(len(rho)):
        for j in range(i + 1, len(rho)):
            if rho[i] > rho[j]:
                sign = -sign
    return sign


def suspend(t: FiniteOperadTable) -> FiniteOperadTable:
    """Twist by a determinant line (one degree-1 letter per leg and per
    genus, one degree -1 marker), toggling parity.

    Defined on composition-only tables: every nonzero composition must
    sit at genus 0 and every contraction matrix must vanish.  On that
    domain the twist is an exact involution and preserves each axiom
    verdict in the other parity.  The restriction is forced, not chosen:
    under the double-contraction axiom both routes acquire identical
    twist factors, so no component-wise sign can turn anticommuting
    contractions into commuting ones, and a genus-odd self-composition
    obstructs the symmetry axiom the same way.
    """
    assert t.parity in (EVEN, ODD), "suspension applies to modular tables"
    for key, mat in t.contr.items():
        if mat.entries:
            raise ValueError(
                "cannot suspend a table with nonzero contraction %r: the "
                "det-line twist multiplies both routes of the "
                "double-contraction axiom by the same factor, so the "
                "odd/even sign difference survives any such twist" % (key,))
    for key, mat in t.comp.items():
        if mat.entries and (key[0][1] != 0 or key[2][1] != 0):
            raise ValueError(
                "cannot suspend a table with nonzero genus composition %r: "
                "self-compositions at odd det-line shift obstruct the "
                "symmetry axiom" % (key,))

    up = t.parity == ODD
    mod = t.module
    degrees = {key: tuple(d + _shift(key) if up else d - _shift(key)
                          for d in degs)
               for key, degs in mod.degrees.items()}
    action = {key: {rho: RationalMatrix(
        mat.rows, mat.cols,
        {rc: x * _perm_sgn(rho) for rc, x in mat.entries.items()})
        for rho, mat in table.items()}
        for key, table in mod.action.items()}

    comp = {}
    for (ka, a, kb, b), mat in t.comp.items():
        const = _rearrange_comp(ka[0], ka[1], a, kb[0], kb[1], b)
        s_b = _shift(kb)
        # the Koszul diagonal reads the degree of the first factor on the
        # odd side of the shift, in both directions; that makes the
        # up and down twists literally equal, hence the involution.
        degs_x = (mod.degrees if up else degrees)[ka]
        dim_b = len(mod.degrees[kb])
        entries = {}
        for (row, col), x in mat.entries.items():
            dx = degs_x[col // dim_b]
            sign = const * (-1 if (dx * s_b) % 2 else 1)
            entries[(row, col)] = x * sign
        comp[(ka, a, kb, b)] = RationalMatrix(mat.rows, mat.cols, entries)

    return FiniteOperadTable(FiniteModularModule(degrees, action),
                             EVEN if up else ODD, comp, dict(t.contr))

import pytest

from highprob.calculus import (
    CL_BASIS,
    Meta,
    THEORIES,
    apply_substitution,
    check_derivation,
    is_tautology,
    match_axiom,
    match_template,
    modal_leaves,
    parse_proof,
    scheme_template,
    scott_template,
)
from highprob.corpus import PROOF_CORPUS
from highprob.errors import ProofFormatError
from highprob.formula import (
    And,
    Atom,
    B,
    K,
    Not,
    implies,
    parse_kb,
)

p, q = Atom("p"), Atom("q")


class TestMatching:
    def test_basic(self):
        subst = match_template(implies(Meta("x"), Meta("x")), implies(p, p))
        assert subst == {"x": p}
        assert match_template(implies(Meta("x"), Meta("x")),
                              implies(p, q)) is None

    def test_substitution_round_trip(self):
        t = implies(K(Meta("x")), B(And(Meta("x"), Meta("y"))))
        subst = {"x": Not(p), "y": q}
        inst = apply_substitution(t, subst)
        assert match_template(t, inst) == subst

    def test_match_axiom(self):
        assert match_axiom(parse_kb("B p -> K B p"), "Ap") == {"phi": p}
        assert match_axiom(parse_kb("~B p -> K ~B p"), "An") == {"phi": p}
        assert match_axiom(parse_kb("K (p -> q) -> (B p -> B q)"),
                           "KBM") == {"phi": p, "psi": q}
        assert match_axiom(parse_kb("B p -> B B p"), "KBM") is None
        assert match_axiom(parse_kb("B p -> <B> p"), "D") == {"phi": p}

    def test_scott_schemes_by_index(self):
        inst = apply_substitution(scott_template(2),
                                  {"phi1": p, "phi2": q,
                                   "psi1": q, "psi2": p})
        assert match_axiom(inst, "Scott2") is not None
        assert match_axiom(inst, "Scott1") is None
        assert scheme_template("Scott0") is None
        assert scheme_template("NoSuch") is None
        from highprob.errors import ExpansionTooLarge
        with pytest.raises(ExpansionTooLarge):
            scheme_template("Scott17")  # template itself would explode

    def test_cl_basis_instances(self):
        got = match_axiom(parse_kb("p -> (q -> p)"), "CL")
        assert got == {"phi": p, "psi": q}
        assert match_axiom(parse_kb("p & q -> p"), "CL") is not None
        assert match_axiom(parse_kb("p -> q"), "CL") is None
        assert len(CL_BASIS) == 7


class TestTautology:
    def test_propositional(self):
        assert is_tautology(parse_kb("p | ~p"))
        assert not is_tautology(parse_kb("p | q"))

    def test_modal_opacity(self):
        assert is_tautology(parse_kb("B p | ~B p"))
        # true scheme, but not by truth tables
        assert not is_tautology(parse_kb("K p -> p"))

    def test_leaves_and_budget(self):
        f = parse_kb("K p & B (p & q) & q")
        assert set(modal_leaves(f)) == {K(p), B(And(p, q)), q}
        # over budget the check conservatively refuses rather than spending
        # 2^13 rows, so even a genuine tautology reports False
        wide = parse_kb(" | ".join(f"x{i}" for i in range(13)))
        assert not is_tautology(implies(wide, wide))


SIMPLE = """
1. K p -> B p ; AX Ap {phi := p}
2. K p ; AX KS5_T
"""


class TestProofParsing:
    def test_parses_structure(self):
        d = parse_proof("""
# belief from knowledge of p, given K p as an axiom line
1. K (p -> q) -> (K p -> K q) ; AX KS5_K
2. B true ; AX N
3. K (B true) ; MN 2
""")
        assert len(d.lines) == 3
        assert d.conclusion() == K(B(parse_kb("true")))
        just = d.lines[0][1]
        assert just.rule == "AX" and just.scheme == "KS5_K"

    def test_explicit_substitution(self):
        d = parse_proof("1. K p -> B p ; AX Ap {phi := p}\n")
        assert d.lines[0][1].subst == (("phi", p),)

    def test_format_errors(self):
        for bad in ("1 K p ; AX Ap",
                    "2. K p ; AX Ap",        # must start at 1
                    "1. K p ; ZZ",
                    "1. K p ; MP one two",
                    "1. K p ; AX Ap {phi = p}"):
            with pytest.raises(ProofFormatError):
                parse_proof(bad)


class TestChecking:
    def test_corpus_is_accepted(self):
        for name, theory, text in PROOF_CORPUS:
            res = check_derivation(parse_proof(text), theory, cl_oracle=True)
            assert res.accepted, (name, res.line, res.reason)

    def test_rejects_forward_reference(self):
        d = parse_proof("""
1. B p ; MP 1 2
2. p -> B p ; AX Ap
""")
        res = check_derivation(d, "kb")
        assert not res.accepted and res.line == 1

    def test_rejects_wrong_mp(self):
        d = parse_proof("""
1. B p -> K B p ; AX Ap
2. K B q ; MP 1 1
""")
        res = check_derivation(d, "kb")
        assert not res.accepted and res.line == 2

    def test_rejects_bad_substitution(self):
        d = parse_proof("1. K p -> B q ; AX Ap {phi := p}\n")
        assert not check_derivation(d, "kb").accepted

    def test_theory_gating(self):
        bf = parse_proof("1. ~B ~true ; AX BF\n")
        assert check_derivation(bf, "kb").accepted
        assert check_derivation(bf, "kb-half").accepted
        res = check_derivation(bf, "kb-half-minus")
        assert not res.accepted and "BF" in res.reason
        scott = parse_proof(
            "1. " + "K ((~p & ~q) | (~p & q) | (p & q)) & B p -> B q"
            " ; AX Scott1 {phi1 := p, psi1 := q}\n")
        assert check_derivation(scott, "kb-half").accepted
        assert not check_derivation(scott, "kb").accepted

    def test_necessitation(self):
        d = parse_proof("""
1. p -> (q -> p) ; AX CL
2. K (p -> (q -> p)) ; MN 1
""")
        assert check_derivation(d, "kb").accepted
        bad = parse_proof("""
1. p -> (q -> p) ; AX CL
2. K (q -> p) ; MN 1
""")
        assert not check_derivation(bad, "kb").accepted

    def test_cl_oracle_flag(self):
        d = parse_proof("1. p | ~p ; AX CL\n")
        assert not check_derivation(d, "kb").accepted
        assert check_derivation(d, "kb", cl_oracle=True).accepted

    def test_theory_names(self):
        assert set(THEORIES) == {"kb", "kb-half", "kb-half-minus"}

"""
Tests for the polynomial system model, the DSL and the JSON document
"""
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polylift.errors import (
    AssemblyLimitExceeded,
    ConstantTermError,
    DegreeZeroTerm,
    DimensionMismatch,
    DocumentError,
    DSLSyntaxError,
    ExponentLengthMismatch,
    UnknownIdentifier,
)
from polylift.models.dsl import parse_dsl, to_dsl
from polylift.models.ode import (
    Monomial,
    PolyODE,
    canonical_word,
    compile_system,
    degree_norms,
    word_index,
    word_of_index,
)
from polylift.models.schemas import SystemDocument
from polylift.tensor import as_sparse
from polylift.utils.system_loader import SystemLoader
from tests.conftest import VANDERPOL_DSL


def test_vanderpol_coefficients(vanderpol):
    assert vanderpol.n == 2
    assert vanderpol.k == 3
    assert vanderpol.F[0].toarray().tolist() == [[0.0, 1.0], [-1.0, 0.6]]
    assert vanderpol.F[1].nnz == 0
    f3 = vanderpol.F[2]
    assert f3.shape == (2, 8)
    assert f3.nnz == 1
    # x1^2 x2 sits at the word (0, 0, 1)
    assert f3[1, 1] == pytest.approx(-0.6)
    assert degree_norms(vanderpol) == pytest.approx((1.6, 0.0, 0.6))


def test_vanderpol_json_matches_dsl(vanderpol, config_dir):
    from_json, params = SystemLoader.from_path(config_dir / "vanderpol.json")
    from_dsl, dsl_params = SystemLoader.from_path(config_dir / "vanderpol.ode")
    assert params == {}
    assert dsl_params == {"omega": 1.0, "r": 0.6}
    for a, b, c in zip(from_json.F, from_dsl.F, vanderpol.F):
        assert (a != b).nnz == 0
        assert (b != c).nnz == 0


def test_canonical_word_and_indices():
    assert canonical_word((2, 1)) == (0, 0, 1)
    assert word_index((0, 0, 1), 2) == 1
    assert word_index((1, 1), 3) == 4
    assert word_of_index(4, 3, 2) == (1, 1)
    for index in range(27):
        assert word_index(word_of_index(index, 3, 3), 3) == index


def test_compile_accumulates_duplicates():
    ode = compile_system(
        [[Monomial(1.0, (1, 1)), Monomial(2.0, (1, 1)), Monomial(-1.0, (1, 0))], [Monomial(1.0, (0, 1))]],
        2,
    )
    assert ode.k == 2
    assert ode.F[1][0, 1] == 3.0
    assert ode.F[1].nnz == 1


def test_compile_drops_cancelled_top_degree():
    ode = compile_system([[Monomial(1.0, (1,)), Monomial(2.0, (3,)), Monomial(-2.0, (3,))]], 1)
    assert ode.k == 1


def test_compile_linear_only_and_empty():
    assert compile_system([[Monomial(-1.0, (1,))]], 1).k == 1
    empty = compile_system([[]], 1)
    assert empty.k == 1
    assert empty.F[0].nnz == 0


def test_compile_errors():
    with pytest.raises(DegreeZeroTerm):
        Monomial(1.0, (0, 0))
    with pytest.raises(ExponentLengthMismatch):
        compile_system([[Monomial(1.0, (1,))], []], 2)
    with pytest.raises(DimensionMismatch):
        compile_system([[Monomial(1.0, (1,))]], 2)


def test_polyode_shape_checks():
    with pytest.raises(DimensionMismatch):
        PolyODE(n=2, F=(as_sparse(np.eye(2)), as_sparse(np.ones((2, 3)))))
    ode = PolyODE(n=1, F=(as_sparse([[1.0]]),))
    assert ode.coefficient(3).shape == (1, 1)
    assert ode.coefficient(3).nnz == 0


monomial_terms = st.lists(
    st.tuples(
        st.floats(min_value=-5, max_value=5, allow_nan=False).filter(lambda c: abs(c) > 1e-3),
        st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda e: 1 <= sum(e) <= 4),
    ),
    max_size=5,
)


@settings(max_examples=100)
@given(st.tuples(monomial_terms, monomial_terms), st.data())
def test_compiled_rhs_matches_direct_evaluation(terms, data):
    rhs = [[Monomial(c, e) for c, e in eq] for eq in terms]
    ode = compile_system(rhs, 2)
    x = np.array(data.draw(st.tuples(*[st.floats(-2, 2, allow_nan=False)] * 2)))
    direct = np.array([sum(m.coeff * x[0] ** m.exponents[0] * x[1] ** m.exponents[1] for m in eq) for eq in rhs])
    scale = 1.0 + sum(abs(m.coeff) * 2.0 ** m.degree for eq in rhs for m in eq)
    np.testing.assert_allclose(ode.rhs(x), direct, rtol=0, atol=1e-12 * scale)


def test_compile_one_column_per_monomial():
    ode = compile_system([[Monomial(1.0, (1, 1)), Monomial(1.0, (2, 0)), Monomial(1.0, (0, 2))], []], 2)
    row = ode.F[1].getrow(0)
    assert sorted(row.indices.tolist()) == [0, 1, 3]


def test_monomials_inverse_of_compile(vanderpol):
    again = compile_system(vanderpol.monomials(), vanderpol.n)
    for a, b in zip(again.F, vanderpol.F):
        assert (a != b).nnz == 0


# DSL

def test_parse_constant_folding_and_params():
    parsed = parse_dsl("param a = 2\nx1' = a*(x1 - 3*x1^2)")
    assert parsed.n == 1
    ode = parsed.compile()
    assert ode.F[0][0, 0] == 2.0
    assert ode.F[1][0, 0] == -6.0


def test_parse_overrides():
    parsed = parse_dsl(VANDERPOL_DSL, overrides={"r": 1.0})
    assert parsed.params["r"] == 1.0
    ode = parsed.compile()
    assert ode.F[2][1, 1] == -1.0


def test_parse_multiline_parentheses_and_comments():
    text = "x1' = x2  # linear\nx2' = -(x1 +\n   x2)\n"
    ode = parse_dsl(text).compile()
    assert ode.F[0].toarray().tolist() == [[0.0, 1.0], [-1.0, -1.0]]


def test_parse_exact_cancellation():
    ode = parse_dsl("x1' = 0.1*x1 + 0.2*x1 - 0.3*x1 + x1^2").compile()
    assert ode.F[0].nnz == 0
    assert ode.k == 2


def _terms(monomials):
    return {(m.coeff, m.exponents) for m in monomials}


def test_parse_zero_coefficient_is_eliminated():
    parsed = parse_dsl("x1' = x1 + 0*x2")
    assert parsed.n == 2
    assert _terms(parsed.rhs[0]) == {(1.0, (1, 0))}
    assert parsed.rhs[1] == []


def test_parse_expands_products():
    parsed = parse_dsl("x1' = (x1+x2)^2")
    assert parsed.n == 2
    assert _terms(parsed.rhs[0]) == {(1.0, (2, 0)), (2.0, (1, 1)), (1.0, (0, 2))}
    ode = parsed.compile()
    assert ode.k == 2
    assert ode.F[0].nnz == 0
    assert ode.F[1].toarray().tolist() == [[1.0, 2.0, 0.0, 1.0], [0.0, 0.0, 0.0, 0.0]]


def test_parse_missing_equation_is_zero(caplog):
    with caplog.at_level("WARNING", logger="polylift.models.dsl"):
        parsed = parse_dsl("x2' = x1\n")
    assert parsed.n == 2
    assert parsed.rhs[0] == []
    assert _terms(parsed.rhs[1]) == {(1.0, (1, 0))}
    assert "x1" in caplog.text
    ode = parsed.compile()
    assert ode.F[0].toarray().tolist() == [[0.0, 0.0], [1.0, 0.0]]


def test_parse_rejects_undeclared_override():
    with pytest.raises(UnknownIdentifier, match="rr"):
        parse_dsl(VANDERPOL_DSL, overrides={"rr": 5.0})
    with pytest.raises(UnknownIdentifier, match="undeclared"):
        parse_dsl("x1' = x1\n", overrides={"a": 1.0})


def test_json_input_rejects_overrides(config_dir):
    text = (config_dir / "vanderpol.json").read_text()
    with pytest.raises(DocumentError, match="declares no parameters"):
        SystemLoader.from_text(text, name="vanderpol.json", overrides={"r": 1.0})


def test_compile_size_guard():
    with pytest.raises(AssemblyLimitExceeded):
        compile_system([[Monomial(1.0, (45, 0, 0))], [], []], 3)
    with pytest.raises(AssemblyLimitExceeded):
        SystemLoader.from_text("x1' = x1^45\nx2' = x2\nx3' = x3\n", name="high.ode")


@pytest.mark.parametrize(
    "text, error, line, column",
    [
        ("x1' = 2 *\n", DSLSyntaxError, 1, 10),
        ("x1' = y*x1\n", UnknownIdentifier, 1, 7),
        ("x1' = x1 + 1\n", ConstantTermError, 1, 1),
        ("x1' = x1\nx1' = x1\n", DSLSyntaxError, 2, 1),
        ("x1' = x1^0\n", DSLSyntaxError, 1, 10),
        ("x1' = x1 $ 2\n", DSLSyntaxError, 1, 10),
    ],
)
def test_parse_errors_are_located(text, error, line, column):
    with pytest.raises(error) as excinfo:
        parse_dsl(text)
    assert (excinfo.value.line, excinfo.value.column) == (line, column)


def test_constant_term_error_message():
    with pytest.raises(ConstantTermError, match="constant term"):
        parse_dsl("param c = 2\nx1' = (x1 + 1)^2 - 1 + c\n")


def test_to_dsl_round_trip(vanderpol):
    text = to_dsl(vanderpol)
    again = parse_dsl(text).compile()
    assert again.monomials() == vanderpol.monomials()


@settings(max_examples=100)
@given(st.tuples(monomial_terms, monomial_terms))
def test_to_dsl_round_trip_random(terms):
    ode = compile_system([[Monomial(c, e) for c, e in eq] for eq in terms], 2)
    again = parse_dsl(to_dsl(ode)).compile()
    assert again.monomials() == ode.monomials()


# JSON document

def test_document_round_trip(vanderpol):
    document = SystemDocument.from_ode(vanderpol)
    again = SystemDocument.model_validate_json(document.model_dump_json()).to_ode()
    assert again.monomials() == vanderpol.monomials()


def test_document_errors():
    with pytest.raises(DocumentError):
        SystemLoader.from_json_text("{not json")
    with pytest.raises(DocumentError):
        SystemLoader.from_json_text(json.dumps({"n": 2, "rhs": [[]]}))
    with pytest.raises(DegreeZeroTerm):
        SystemLoader.from_json_text(json.dumps({"n": 1, "rhs": [[{"coeff": 1.0, "exponents": [0]}]]}))


def test_loader_detects_format():
    assert SystemLoader.detect_format("system.json", "") == "json"
    assert SystemLoader.detect_format("<request>", '  {"n": 1}') == "json"
    assert SystemLoader.detect_format("system.ode", "x1' = x1") == "dsl"

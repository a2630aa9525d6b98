"""HTTP endpoints: schemas round-trip, domain errors map to 400, parse to 422."""

from fastapi.testclient import TestClient

from logdiff.service import schemas
from logdiff.service.app import app

client = TestClient(app)


FIELD_T = {"p": 2, "vars": ["t"]}
FIELD_TU = {"p": 2, "vars": ["t", "u"]}


def form_json(field, degree, coeffs):
    return {"p": field["p"], "vars": field["vars"], "degree": degree, "coeffs": coeffs}


class TestHealth:
    def test_health(self):
        r = client.get("/v1/health")
        assert r.status_code == 200
        assert r.json()["status"] == "ok"


class TestOmega:
    def test_truncated(self):
        r = client.post(
            "/v1/omega", json={"ring": {"family": "truncated", "p": 2, "n": 2}}
        )
        assert r.status_code == 200
        body = r.json()
        assert body["group"]["invariant_factors"] == [2, 2]
        assert body["oracle_match"] is True

    def test_modpk(self):
        r = client.post("/v1/omega", json={"ring": {"family": "modpk", "p": 3, "n": 2}})
        assert r.status_code == 200
        body = r.json()
        assert body["group"]["invariant_factors"] == []
        assert body["oracle_match"] is True

    def test_degree_two(self):
        r = client.post(
            "/v1/omega",
            json={"ring": {"family": "truncated", "p": 2, "n": 3}, "n": 2},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["group"]["invariant_factors"] == []
        assert body["oracle_match"] is None

    def test_bad_family_is_422(self):
        r = client.post("/v1/omega", json={"ring": {"family": "what", "p": 2, "n": 2}})
        assert r.status_code == 422

    def test_oversized_ring_is_422(self):
        r = client.post(
            "/v1/omega", json={"ring": {"family": "truncated", "p": 2, "n": 12}}
        )
        assert r.status_code == 422


class TestNuCheck:
    def test_dlog_t(self):
        r = client.post(
            "/v1/nu-check",
            json={"field": FIELD_T, "form": form_json(FIELD_T, 1, {"1": "1"})},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["in_nu"] is True
        assert body["class"]["coeffs"] == {}

    def test_dt(self):
        r = client.post(
            "/v1/nu-check",
            json={"field": FIELD_T, "form": form_json(FIELD_T, 1, {"1": "t"})},
        )
        body = r.json()
        assert body["in_nu"] is False
        assert body["class"]["coeffs"] == {"1": "t^2"}

    def test_exact_fraction(self):
        # dt/(t^2+t) = (1/(t+1)) dlog t lies in the kernel
        r = client.post(
            "/v1/nu-check",
            json={
                "field": FIELD_T,
                "form": form_json(FIELD_T, 1, {"1": "1/(t+1)"}),
            },
        )
        assert r.json()["in_nu"] is True

    def test_parse_error_is_422(self):
        r = client.post(
            "/v1/nu-check",
            json={"field": FIELD_T, "form": form_json(FIELD_T, 1, {"1": "x + !"})},
        )
        assert r.status_code == 422


class TestNf:
    def test_witness_round_trip(self):
        r = client.post(
            "/v1/nf",
            json={"field": FIELD_T, "form": form_json(FIELD_T, 1, {"1": "t^2+t"})},
        )
        body = r.json()
        assert body["normal_form"]["coeffs"] == {"1": "t^2"}
        # response re-parses under the same schema
        schemas.NfResponse.model_validate(body)


class TestDsym:
    def test_wedge(self):
        r = client.post(
            "/v1/dsym",
            json={
                "symbols": {
                    "p": 2,
                    "vars": ["t", "u"],
                    "terms": [{"coeff": 1, "entries": ["t", "u"]}],
                }
            },
        )
        assert r.json()["form"]["coeffs"] == {"1,2": "1"}

    def test_zero_entry_is_400(self):
        r = client.post(
            "/v1/dsym",
            json={
                "symbols": {
                    "p": 2,
                    "vars": ["t"],
                    "terms": [{"coeff": 1, "entries": ["0"]}],
                }
            },
        )
        assert r.status_code == 400
        assert r.json()["error"] == "ZeroEntry"


class TestDecompose:
    def test_round_trip(self):
        r = client.post(
            "/v1/decompose",
            json={
                "field": FIELD_TU,
                "form": form_json(FIELD_TU, 2, {"1,2": "t/(t+u)"}),
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert body["verified"] is True
        assert body["residual"]["coeffs"] == {}
        assert body["trace"]
        # re-verify through the dsym endpoint (value equality, not text)
        from logdiff.arith import FunctionField

        fld = FunctionField(2, ("t", "u"))
        r2 = client.post("/v1/dsym", json={"symbols": body["symbols"]})
        got = fld.parse(r2.json()["form"]["coeffs"]["1,2"])
        assert got == fld.parse("t/(t+u)")

    def test_not_in_nu_is_400(self):
        r = client.post(
            "/v1/decompose",
            json={"field": FIELD_T, "form": form_json(FIELD_T, 1, {"1": "t"})},
        )
        assert r.status_code == 400
        assert r.json()["error"] == "NotInNu"


class TestWitt:
    def test_add(self):
        r = client.post(
            "/v1/witt", json={"p": 2, "i": 2, "op": "add", "a": [1, 0], "b": [1, 0]}
        )
        assert r.json()["result"] == [0, 1]

    def test_add_with_carry_cancellation(self):
        r = client.post(
            "/v1/witt", json={"p": 2, "i": 2, "op": "add", "a": [1, 0], "b": [1, 1]}
        )
        assert r.json()["result"] == [0, 0]

    def test_f4(self):
        r = client.post(
            "/v1/witt",
            json={"p": 2, "e": 2, "i": 1, "op": "mul", "a": [[0, 1]], "b": [[0, 1]]},
        )
        assert r.json()["result"] == [[1, 1]]

    def test_frobenius(self):
        r = client.post(
            "/v1/witt", json={"p": 3, "i": 2, "op": "frobenius", "a": [2, 1]}
        )
        assert r.json()["result"] == [2, 1]

    def test_missing_operand(self):
        r = client.post("/v1/witt", json={"p": 2, "i": 1, "op": "add", "a": [1]})
        assert r.status_code in (400, 422)


class TestHsym:
    def test_q4(self):
        r = client.post("/v1/hsym", json={"q": 4, "i": 1, "n": 1})
        body = r.json()
        assert body["group"]["invariant_factors"] == [2]
        assert body["oracle_match"] is True

    def test_out_of_range_is_400(self):
        r = client.post("/v1/hsym", json={"q": 8, "i": 1, "n": 1})
        assert r.status_code == 400
        assert r.json()["error"] == "OutOfSupportedRange"


class TestNuBasis:
    def test_univariate(self):
        r = client.post(
            "/v1/nu-basis",
            json={"field": FIELD_T, "degree": 1, "degree_bound": 2},
        )
        body = r.json()
        assert body["dimension"] == 3
        schemas.NuBasisResponse.model_validate(body)


class TestSolveAS:
    def test_solvable(self):
        r = client.post(
            "/v1/solve-as",
            json={"field": FIELD_T, "g": "t^2+t", "degree_bound": 2},
        )
        assert r.json()["solution"] == "t"

    def test_oversized_bound_is_422(self):
        r = client.post(
            "/v1/solve-as", json={"field": FIELD_T, "g": "t", "degree_bound": 40}
        )
        assert r.status_code == 422

    def test_unsolvable(self):
        r = client.post(
            "/v1/solve-as", json={"field": FIELD_T, "g": "t", "degree_bound": 4}
        )
        assert r.json()["solution"] is None


class TestRoundTripSerialization:
    def test_form_payload_round_trip(self):
        # form -> JSON -> form is the identity on values
        from logdiff.arith import FunctionField
        from logdiff.forms import omega

        fld = FunctionField(2, ("t", "u"))
        w = omega(fld, (1, 2), fld.parse("(t^2+u)/(t*u+1)"))
        payload = schemas.FormPayload.from_form(w)
        again = schemas.FormPayload.model_validate(payload.model_dump()).to_form(fld)
        assert again == w

"""JSON wire formats for fields, elements, divisors, power products,
matrices and radial models.

Rational data travels as exact strings ("3/2"); archimedean data as
floats.  Primes are addressed by (p, index) with index the position in the
sorted factorization of p.
"""

from __future__ import annotations

from fractions import Fraction

from .arithdiv import ArithmeticDivisor, PowerProduct
from .quadfield import FieldElement, QuadraticField, make_field, prime_by_index
from .wellposed import RadialModel, fubini_study, radial_table_model


def field_from_json(obj: dict) -> QuadraticField:
    return make_field(int(obj["m"]))


def field_to_json(F: QuadraticField) -> dict:
    return {"m": F.m, "disc": F.disc, "r1": F.r1, "r2": F.r2, "omega": F.omega_desc}


def element_from_json(F: QuadraticField, obj: dict) -> FieldElement:
    return F.element(Fraction(str(obj["a"])), Fraction(str(obj.get("b", 0))))


def element_to_json(x: FieldElement) -> dict:
    return {"a": str(x.a), "b": str(x.b)}


def _coefficient(value) -> object:
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    return float(value)


def divisor_from_json(F: QuadraticField, obj: dict) -> ArithmeticDivisor:
    coeffs = {}
    for entry in obj.get("coeffs", []):
        P = prime_by_index(F, int(entry["p"]), int(entry.get("index", 0)))
        coeffs[P] = _coefficient(entry["c"])
    green = obj.get("green", [0.0, 0.0])
    return ArithmeticDivisor(F, coeffs, tuple(float(g) for g in green))


def divisor_to_json(div: ArithmeticDivisor) -> dict:
    coeffs = []
    for P in div.support():
        c = div.coeffs[P]
        coeffs.append(
            {
                "p": P.p,
                "index": P.index,
                "c": str(c) if isinstance(c, Fraction) else float(c),
            }
        )
    return {"coeffs": coeffs, "green": list(div.green)}


def _exponent(value) -> object:
    # strings and integers take the exact path; floats stay floating
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    return float(value)


def power_product_from_json(F: QuadraticField, obj: dict) -> PowerProduct:
    factors = []
    for entry in obj.get("factors", []):
        x = element_from_json(F, entry)
        factors.append((x, _exponent(entry.get("e", 1))))
    return PowerProduct(F, factors)


def power_product_to_json(phi: PowerProduct) -> dict:
    factors = []
    for x, e in phi.factors:
        entry = element_to_json(x)
        entry["e"] = str(e) if isinstance(e, Fraction) else float(e)
        factors.append(entry)
    return {"factors": factors}


def gens_from_json(F: QuadraticField, obj) -> list[PowerProduct]:
    if isinstance(obj, dict):
        obj = obj.get("gens", [])
    return [power_product_from_json(F, entry) for entry in obj]


def model_from_json(obj: dict) -> RadialModel:
    green = obj.get("green", "fubini-study")
    n_max = int(obj.get("nmax", 40))
    if green == "fubini-study":
        return fubini_study(n_max=n_max)
    if isinstance(green, dict) and "table" in green:
        return radial_table_model(
            [(float(r), float(v)) for r, v in green["table"]], n_max=n_max
        )
    raise ValueError(f"unknown model green: {green!r}")

"""Shared test helpers: deterministic random elements of small function fields."""

import random

import pytest

from logdiff.arith import FunctionField, MultiPoly, RatFunc
from logdiff.forms import DiffForm
import itertools


@pytest.fixture
def rng():
    return random.Random(20260808)


def random_poly(rng, field, max_deg, max_terms=4, nonzero=False):
    p, m = field.p, field.m
    while True:
        terms = {}
        for _ in range(rng.randint(0 if not nonzero else 1, max_terms)):
            e = tuple(rng.randint(0, max_deg) for _ in range(m))
            if sum(e) > max_deg:
                e = tuple(x % 2 for x in e)
            terms[e] = rng.randint(1, p - 1)
        poly = MultiPoly(p, m, terms)
        if not (nonzero and poly.is_zero):
            return poly


def random_ratfunc(rng, field, max_deg, nonzero=False):
    num = random_poly(rng, field, max_deg, nonzero=nonzero)
    den = random_poly(rng, field, max_deg, nonzero=True)
    return RatFunc(num, den)


def random_form(rng, field, degree, max_deg, max_support=None):
    tuples = list(itertools.combinations(range(1, field.m + 1), degree))
    if max_support:
        rng.shuffle(tuples)
        tuples = tuples[:max_support]
    coeffs = {}
    for s in tuples:
        if rng.random() < 0.8:
            coeffs[s] = random_ratfunc(rng, field, max_deg)
    return DiffForm(field, degree, coeffs)


def random_unit(rng, field, max_deg):
    return random_ratfunc(rng, field, max_deg, nonzero=True)


def fields_for(p_list, m_list):
    names = ("t", "u", "v", "w")
    return [FunctionField(p, names[:m]) for p in p_list for m in m_list]

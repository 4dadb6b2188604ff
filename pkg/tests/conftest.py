from functools import lru_cache

import pytest

from decomp.building import build_building
from decomp.coxeter import build_coxeter
from decomp.decompositions import decompositions, vector_decompositions


@lru_cache(maxsize=None)
def bldg(spec):
    return build_building(spec)


@lru_cache(maxsize=None)
def cox(name):
    return build_coxeter(name)


def dec(spec):
    return decompositions(bldg(spec))


def vdec(spec):
    return vector_decompositions(bldg(spec))


ROSTER = ["A(p=2,n=2)", "A(p=3,n=2)", "thin:A2", "A(p=2,n=3)"]


@pytest.fixture(params=ROSTER)
def roster_spec(request):
    return request.param

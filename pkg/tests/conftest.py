import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent.parent / "fixtures"

GENERATORS = {
    "example1": ((1, 0), (1, 1), (1, 2)),
    "example2": ((1, 0), (0, 2), (0, 3)),
    "example3": tuple((1, b, c) for b in (-1, 0, 1) for c in (-1, 0, 1)),
    "example4": ((1, 0), (1, 1), (1, 2)),
    "example5": ((1, 0), (1, 2), (0, 3), (0, 4), (0, 5)),
    "affine_1": ((1,),),
    "affine_2": ((1, 0), (0, 1)),
    "affine_3": ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    "cusp": ((2,), (3,)),
    "example1_x_a1": ((1, 0, 0), (1, 1, 0), (1, 2, 0), (0, 0, 1)),
}


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


def load_fixture(name: str) -> dict:
    with open(fixture_path(name)) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def monoids():
    from mltoric.monoid import AffineMonoid
    return {name: AffineMonoid(gens, name=name)
            for name, gens in GENERATORS.items()}

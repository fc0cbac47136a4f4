import pytest

from znlength.groupmodel import FreeAbelianGroup, FreeGroup
from znlength.lengthfn import LexAbsAbelian, WeightedFree, WordLength
from znlength.lexgroup import LexVec


@pytest.fixture
def f2():
    return FreeGroup(["a", "b"])


@pytest.fixture
def f2_wordlen(f2):
    return WordLength(f2)


@pytest.fixture
def w2():
    m = FreeGroup(["a", "t"])
    return WeightedFree(m, {"a": LexVec.of(1, 0), "t": LexVec.of(0, 1)})


@pytest.fixture
def z2():
    return LexAbsAbelian(FreeAbelianGroup(["a", "t"]))


def words(model, *texts):
    return [model.parse_word(t) for t in texts]

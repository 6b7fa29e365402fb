import random

import pytest

from msrcgr.alphabet import DNA_SYMBOLS, PROTEIN_SYMBOLS

_CRITERIA = []


def record_criterion(number, title, passed, detail=""):
    _CRITERIA.append((number, title, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    def key(entry):
        label = str(entry[0])
        return int(label.rstrip("abc")), label

    for number, title, passed, detail in sorted(_CRITERIA, key=key):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {str(number):>3}. {title}  {detail}")


@pytest.fixture
def rng():
    return random.Random(20240601)


def random_seq(rng, alphabet, lo, hi):
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


def random_dna(rng, lo=4, hi=256):
    return random_seq(rng, DNA_SYMBOLS, lo, hi)


def random_protein(rng, lo=4, hi=200):
    return random_seq(rng, PROTEIN_SYMBOLS, lo, hi)

from pathlib import Path

import pytest

from alba.syntax import parse_inequality, parse_signature, validate_signature

DATA = Path(__file__).parent / "data"
FREGE = "p -> (q -> r) <= (p -> q) -> (p -> r)"
# final line of the worked Frege run, with the signature's residual names
FREGE_GOLDEN = "#j -> ((#j ->b2 #h) ->b1 @m) <= #h ->b1 (#j -> @m)"


@pytest.fixture(scope="session")
def frege_sig():
    return parse_signature((DATA / "frege.sig").read_text())


@pytest.fixture(scope="session")
def frege(frege_sig):
    return parse_inequality(FREGE, frege_sig)


@pytest.fixture(scope="session")
def modal_sig():
    """Normal diamond and box plus a regular diamond and box, all monotone."""
    return validate_signature(
        [("dia", "fn", 1, "1"), ("box", "gn", 1, "1"), ("rdia", "fr", 1, "1"), ("rbox", "gr", 1, "1")]
    )


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)

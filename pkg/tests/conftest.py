import pytest
from hypothesis import HealthCheck, settings

from foldgate.dualities import automorphism_group, find_tau0, zx_dualities
from foldgate.fixtures import block_code, bring, hgp_seed

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def bring_data():
    return bring()


@pytest.fixture(scope="session")
def bring_census(bring_data):
    code = bring_data.code
    auts = automorphism_group(code)
    duals = zx_dualities(code)
    tau = find_tau0(code, bring_data.basis, duals)
    return auts, duals, tau


@pytest.fixture(scope="session")
def hgp_code():
    from foldgate.constructors import hypergraph_product

    return hypergraph_product(hgp_seed(), hgp_seed(), "hgp")


@pytest.fixture(scope="session")
def block():
    return block_code()


def pytest_configure(config):
    # acceptance item -> list of (label, ok); ok is None for a skipped item
    config.acceptance = {}


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "acceptance", {})
    if not results:
        return
    from test_acceptance import ITEMS

    terminalreporter.section("acceptance criteria")
    def order(item):
        digits = "".join(ch for ch in item if ch.isdigit())
        return int(digits), item

    for item in sorted(results, key=order):
        checks = results[item]
        if any(ok is None for _, ok in checks):
            status = "SKIP"
        else:
            status = "PASS" if all(ok for _, ok in checks) else "FAIL"
        failed = [label for label, ok in checks if ok is False]
        line = f"{item:>4}  {status}  {ITEMS[item]}"
        if failed:
            line += "  [failed: " + "; ".join(failed) + "]"
        terminalreporter.write_line(line)

import sys

import pytest

from dnlslab import acceptance


@pytest.fixture(scope="session")
def acceptance_run(tmp_path_factory):
    """One shared acceptance pass; also produces the verify CSV bundle."""
    out_dir = tmp_path_factory.mktemp("verify")
    results = {r.cid: r for r in acceptance.run_all(out_dir=out_dir)}
    for res in results.values():
        print(res.line(), file=sys.__stdout__, flush=True)
    return results, out_dir

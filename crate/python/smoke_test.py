"""Smoke test for the Python bindings.

Build first:
    cargo build --release -p lambda-detector-py --features extension-module
then run this script from the repository root. When the extension is not
installed it is loaded from target/release.
"""

import importlib
import math
import pathlib
import shutil
import sys
import tempfile


def load():
    try:
        return importlib.import_module("lambda_detector_py")
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for name in ("liblambda_detector_py.so", "liblambda_detector_py.dylib", "lambda_detector_py.dll"):
        lib = root / "target" / "release" / name
        if lib.exists():
            tmp = pathlib.Path(tempfile.mkdtemp())
            suffix = ".pyd" if name.endswith(".dll") else ".so"
            shutil.copy(lib, tmp / ("lambda_detector_py" + suffix))
            sys.path.insert(0, str(tmp))
            return importlib.import_module("lambda_detector_py")
    sys.exit("extension not built: cargo build --release -p lambda-detector-py --features extension-module")


def main():
    ld = load()
    p = ld.SystemParams.reference_device()
    p.validate()
    wd = p.omega_ge - ld.mhz(49)

    # balanced drive sits at the calibration anchor
    rabi = ld.matching_amplitude(p, wd)
    assert abs(p.dbm_from_rabi(rabi) + 75.7) < 1e-9

    d = ld.dressed_states(p, wd, rabi)
    assert abs(d["k41"] + d["k42"] - p.kappa) < 1e-9 * p.kappa
    assert abs(d["k41"] - d["k42"]) < 1e-5 * p.kappa

    # empty cavity: r = 2 kappa_ext / kappa - 1
    r = ld.reflection(p, wd, 0.0, p.omega_r)
    assert abs(r - (2 * p.kappa_ext_ratio - 1)) < 1e-6

    # reflection dip at the balanced point
    dip = min(abs(ld.reflection(p, wd, rabi, ld.ghz(10.26 + 0.0005 * k))) for k in range(25))
    assert dip < 0.3, dip

    out = ld.detection_run(p, wd, p.rabi_from_dbm(-75.5), ld.ghz(10.268), ld.ns(85), 0.1)
    assert 0.0 <= out["P_dark"] <= out["P_e"] <= 1.0
    assert 0.5 < out["eta"] < 1.0
    assert abs(out["eta"] - (out["P_e"] - out["P_dark"]) / (1 - math.exp(-0.1))) < 1e-12

    after, without = ld.reset_run(p, wd, p.rabi_from_dbm(-72.1), ld.ghz(10.162), 43.0)
    assert after < 0.03 < without

    cfg = ld.RunConfig("t_s_ns = 85\n")
    assert cfg.number("t_s") == 85e-9
    assert ld.RunConfig(cfg.canonical()).canonical() == cfg.canonical()
    try:
        ld.RunConfig("kappa_ext_ratio = 1.2")
    except ValueError as e:
        assert "line 1" in str(e)
    else:
        raise AssertionError("out-of-range ratio accepted")

    try:
        ld.detection_run(p, p.omega_ge + ld.mhz(10), rabi, p.omega_r, ld.ns(85), 0.1)
    except ValueError:
        pass
    else:
        raise AssertionError("non-nested drive accepted")

    print(f"eta = {out['eta']:.4f}, P_dark = {out['P_dark']:.5f}, reset P_e = {after:.4f}")
    print("python smoke test passed")


if __name__ == "__main__":
    main()

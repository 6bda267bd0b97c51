#!/usr/bin/env python3
"""Smoke test for the split3_py extension module.

Builds nothing itself: expects `cargo build -p split3-py` to have produced
target/debug/libsplit3_py.so (or a release build). Copies the library under
the importable name and walks through the main entry points.
"""

import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def import_module():
    candidates = [
        ROOT / "target" / "debug" / "libsplit3_py.so",
        ROOT / "target" / "release" / "libsplit3_py.so",
    ]
    for built in candidates:
        if built.exists():
            break
    else:
        sys.exit("build the extension first: cargo build -p split3-py")
    staging = pathlib.Path(tempfile.mkdtemp(prefix="split3_py_"))
    shutil.copy2(built, staging / "split3_py.so")
    sys.path.insert(0, str(staging))
    import split3_py

    return split3_py


def main():
    m = import_module()

    names = [name for name, _ in m.fixture_list()]
    assert "sl2" in names and "binary-sl2" in names, names

    r = m.Record.fixture("sl2")
    assert r.arity == 3
    assert r.dimension == 3
    assert r.basis == ["e", "f", "h"]
    assert r.flavor == "leibniz_with_automorphism"
    assert r.bracket(0, 1, 0) == ["2", "0", "0"]
    assert "dim=3" in repr(r)

    out, code = r.analyze()
    assert code == 0, out
    report = json.loads(out)
    assert report["summary"]["all_pass"] is True
    assert report["facts"]["roots"]["module_roots"] == ["-2", "2"]
    assert len(report["facts"]["decompose"]["classes"]) == 1

    text, code = r.analyze(upto="validate", format="text")
    assert code == 0 and text.startswith("PASS"), text

    dot, code = r.analyze(upto="decompose", format="dot")
    assert code == 0 and dot.startswith("graph roots"), dot

    # twisting round trip
    h = r.homify()
    assert h.flavor == "hom_leibniz"
    out, code = h.analyze()
    assert code == 0, out
    assert h.dehomify().render() == r.render()

    # a record that cannot split without eigenvalue hints
    doc = json.loads(m.fixture_text("sl2i"))
    del doc["eigen_hints"]
    stuck = m.Record(json.dumps(doc))
    out, code = stuck.analyze()
    assert code == 1, out
    assert json.loads(out)["summary"]["failed"] == 1

    # family search
    out, code = r.masa_search()
    assert code == 0, out
    assert json.loads(out)["facts"]["masa-search"]["rank"] == 1

    # binary reconstruction
    b = m.Record.fixture("binary-sl2")
    assert b.arity == 2
    out, code = b.reconstruct()
    assert code == 0, out
    rebuilt = m.Record(json.dumps(json.loads(out)["facts"]["reconstruct"]["record"]))
    assert rebuilt.render() == r.render()

    # wrong-arity calls are refused
    for bad in (lambda: b.analyze(), lambda: r.reconstruct(), lambda: r.bracket(9, 0, 0)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()

"""End-to-end checks of the resrand CLI: exit codes, report round-trips,
and config-file parsing."""

import json
import os
import subprocess
import sys
import tempfile

BIN = sys.argv[1]
DATA = sys.argv[2]  # path to data/hormone.csv


def run(*args, expect=0):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise AssertionError(
            f"{args}: exit {proc.returncode} (expected {expect})\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}"
        )
    return proc.stdout


def main():
    checks = 0

    # A report rerun with its recorded seed/config is bit-identical.
    args = ["test", DATA, "--primitive", "perm", "--coef", "1", "--a0", "0",
            "-R", "500", "--seed", "99"]
    first = run(*args)
    second = run(*args)
    assert first == second, "test report is not reproducible byte-for-byte"
    report = json.loads(first)["report"]
    assert report["decision"] == "reject"
    assert report["seed"] == 99
    checks += 1

    # Multi-primitive sensitivity run emits one report per primitive.
    out = json.loads(run("test", DATA, "--primitive", "perm,cluster-sign",
                         "--coef", "1", "--a0", "0", "-R", "200", "--seed", "1"))
    assert len(out["reports"]) == 2
    checks += 1

    # ci returns an interval bracketing the OLS slope estimate.
    out = json.loads(run("ci", DATA, "--primitive", "perm", "--coef", "1",
                         "--lo=-0.1", "--hi=-0.03", "--step", "0.002",
                         "-R", "500", "--seed", "5"))
    ci = out["report"]
    assert ci["lower"] <= -0.0574 <= ci["upper"]
    checks += 1

    # diagnose reports both deviation summaries.
    out = json.loads(run("diagnose", DATA, "--primitive", "sign",
                         "--diag-draws", "50", "--seed", "2"))
    assert out["report"]["mean_deviation"] > 0
    checks += 1

    with tempfile.TemporaryDirectory() as tmp:
        # exact subcommand on a balanced binary design without a cluster column.
        bf = os.path.join(tmp, "bf.csv")
        with open(bf, "w") as f:
            f.write("y,x1\n")
            for i in range(30):
                treated = 1 if i < 3 else 0
                f.write(f"{(i * 37 % 11) - 5 + treated},{treated}\n")
        out = json.loads(run("exact", bf, "--coef", "1", "--a0", "0", "-J", "3"))
        assert out["report"]["exact"] is True
        assert out["report"]["R_used"] == 8
        checks += 1

        # reflect needs a time column; a series file exercises it.
        ts = os.path.join(tmp, "ts.csv")
        with open(ts, "w") as f:
            f.write("y,x1,time\n")
            v = 0.0
            for t in range(80):
                v = 0.5 * v + ((t * 29) % 13 - 6) / 6.0
                f.write(f"{v},{((t * 17) % 7 - 3) / 3.0},{t}\n")
        out = json.loads(run("reflect", ts, "--coef", "1", "--a0", "0",
                             "-J", "4", "-R", "200", "--seed", "3"))
        assert "decided" in out
        checks += 1

        # simulate writes a JSON report and a CSV table.
        rep = os.path.join(tmp, "mc.json")
        table = os.path.join(tmp, "mc.csv")
        run("simulate", "--scenario", "behrens-fisher", "-M", "50",
            "--methods", "exact,wald", "-R", "200", "--seed", "4",
            "-o", rep, "--csv", table)
        mc = json.load(open(rep))["report"]
        assert {m["label"] for m in mc["methods"]} == {"exact", "wald"}
        assert mc["paper_scale"]
        lines = open(table).read().strip().splitlines()
        assert len(lines) == 3  # header + 2 methods
        checks += 1

        # config file drives a subcommand.
        cfg = os.path.join(tmp, "run.ini")
        with open(cfg, "w") as f:
            f.write("[test]\ndata=%s\nprimitive=perm\ncoef=1\na0=0\ndraws=100\nseed=6\n" % DATA)
        out = json.loads(run("--config", cfg, "test"))
        assert out["report"]["R_used"] == 100
        checks += 1

    # error surfaces: missing file -> input error (2)
    run("test", "/nonexistent.csv", "--primitive", "perm", "--coef", "1",
        "--a0", "0", expect=2)
    # hypothesis is mandatory: neither --a nor --coef
    run("test", DATA, "--primitive", "perm", expect=2)
    # numerical error (singular design) -> 3
    with tempfile.TemporaryDirectory() as tmp:
        bad = os.path.join(tmp, "bad.csv")
        with open(bad, "w") as f:
            f.write("y,x1,x2\n")
            for i in range(10):
                f.write(f"{i},{i},{i}\n")  # x2 duplicates x1
        run("test", bad, "--primitive", "perm", "--coef", "1", "--a0", "0", expect=3)
    checks += 3

    print(f"{checks} CLI checks passed")


if __name__ == "__main__":
    main()

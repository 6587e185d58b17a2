"""Command line front end: output determinism, exit codes, cache behavior."""

import json

from bgwtau.cli import cache_load, cache_store, main
from bgwtau.cutjoin import tau_expand
from bgwtau.rational import QQ


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_symbolic_order1(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "expand", "--m", "2", "--N", "symbolic", "--order", "1",
        "--cache-dir", str(tmp_path),
    )
    assert code == 0
    assert out.splitlines()[1] == "tau[1] = -1/2*N*t1^2-1/1*N^2*t2+1/3*t2"


def test_expand_deterministic_bytes(tmp_path, capsys):
    args = ("expand", "--m", "2", "--N", "0", "--order", "4", "--format", "json",
            "--cache-dir", str(tmp_path))
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)  # second run hits the cache
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["coeffs"][1] == "1/3*t2"
    assert doc["m"] == 2


def test_expand_oracle_m3(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "expand", "--m", "3", "--N", "0", "--degree", "6", "--oracle",
        "--cache-dir", str(tmp_path),
    )
    assert code == 0
    assert "tau[1] = -1/6*t1^3+5/8*t3" in out


def test_expand_m3_without_oracle_is_usage_error(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "expand", "--m", "3", "--N", "0", "--order", "2",
        "--cache-dir", str(tmp_path),
    )
    assert code == 2
    assert "oracle" in err


def test_free_energy(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "free-energy", "--m", "2", "--N", "symbolic", "--order", "2",
        "--cache-dir", str(tmp_path),
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "F[1] = -1/2*N*t1^2-1/1*N^2*t2+1/3*t2"


def test_phi_symbolic(capsys):
    code, out, _ = run_cli(capsys, "phi", "--m", "2", "--depth", "1")
    assert code == 0
    assert "phi[m=2,k=1] = -1/2*j^2+3/2*j-5/6" in out


def test_phi_concrete_j(capsys):
    code, out, _ = run_cli(capsys, "phi", "--m", "2", "--N", "symbolic",
                           "--j", "1", "--depth", "1")
    assert code == 0
    assert "z^-2: -1/2*h*N^2-1/2*h*N+1/6*h" in out


def test_schur_lines(capsys):
    code, out, _ = run_cli(capsys, "schur", "--m", "2", "--N", "0", "--degree", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "C[] = 1/1"
    assert "C[1,1] = -1/6*h" in lines
    assert "C[2] = 1/6*h" in lines


def test_verify_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "golden-inline")
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines())
    code, _, err = run_cli(capsys, "verify", "--suite", "constra ints")
    assert code == 2
    code, out, _ = run_cli(capsys, "verify", "--suite", "golden-B", "--format", "json")
    assert code == 1  # defective source entries are honestly reported
    summary = json.loads(out.splitlines()[-1])
    assert summary["failed"] == 4


def test_cache_round_trip(tmp_path):
    T = tau_expand(2, 0, 5)
    cache_store(T, tmp_path)
    loaded = cache_load(2, 0, 5, tmp_path)
    assert loaded is not None
    assert loaded.coeffs == T.coeffs


def test_cache_rejects_corruption(tmp_path):
    T = tau_expand(2, QQ(1, 2), 3)
    path = cache_store(T, tmp_path)
    body = path.read_bytes()
    k = body.index(b"t2")
    path.write_bytes(body[:k] + b"t3" + body[k + 2:])
    assert cache_load(2, QQ(1, 2), 3, tmp_path) is None


def test_cache_rejects_invariant_violation(tmp_path):
    """A well-checksummed file whose body violates the expansion invariants
    must be refused (checksum recomputed to make the corruption silent)."""
    import hashlib

    T = tau_expand(2, 0, 3)
    path = cache_store(T, tmp_path)
    lines = path.read_text().splitlines()
    lines[2] = "1/3*t3"  # violates the 3-reduction
    digest = hashlib.sha256("\n".join(lines[:-1]).encode()).hexdigest()
    lines[-1] = f"checksum={digest}"
    path.write_text("\n".join(lines) + "\n")
    assert cache_load(2, 0, 3, tmp_path) is None


def test_cache_subcommand(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "cache", "dir", "--cache-dir", str(tmp_path))
    assert code == 0 and str(tmp_path) in out
    run_cli(capsys, "expand", "--m", "1", "--N", "0", "--order", "2",
            "--cache-dir", str(tmp_path))
    code, out, _ = run_cli(capsys, "cache", "list", "--cache-dir", str(tmp_path))
    assert "m=1" in out
    code, out, _ = run_cli(capsys, "cache", "clear", "--cache-dir", str(tmp_path))
    assert code == 0
    code, out, _ = run_cli(capsys, "cache", "list", "--cache-dir", str(tmp_path))
    assert out.strip() == ""

import os
import random

import pytest

from mbcr.cli import main
from mbcr.errors import ShareFormatError
from mbcr.gf import Field
from mbcr.sharefile import (
    HEADER_SIZE,
    ShareFile,
    file_to_stripes,
    pack_share_file,
    parse_share_file,
    read_share_file,
    stripes_to_file,
    write_share_file,
)


def make_share_file(node_id=1, stripes=2, alpha=7):
    rng = random.Random(node_id)
    return ShareFile(
        field=Field.gf256(),
        n=5,
        k=2,
        d=3,
        r=2,
        node_id=node_id,
        stripe_count=stripes,
        original_length=17,
        payload=bytes(rng.randrange(256) for _ in range(stripes * alpha)),
    )


class TestShareFile:
    def test_pack_parse_round_trip_is_byte_identity(self):
        sf = make_share_file()
        data = pack_share_file(sf)
        assert parse_share_file(data) == sf
        assert pack_share_file(parse_share_file(data)) == data

    def test_header_layout(self):
        data = pack_share_file(make_share_file())
        assert data[:4] == b"MBCR"
        assert data[4] == 1  # version
        assert data[5] == 1  # binary field kind
        assert int.from_bytes(data[6:8], "little") == 0x11D
        assert int.from_bytes(data[8:10], "little") == 5  # n
        assert len(data) == HEADER_SIZE + 14

    def test_parse_rejects_garbage(self):
        with pytest.raises(ShareFormatError):
            parse_share_file(b"nope")
        good = pack_share_file(make_share_file())
        with pytest.raises(ShareFormatError):
            parse_share_file(b"XXXX" + good[4:])
        with pytest.raises(ShareFormatError):
            parse_share_file(good[:-1])

    def test_file_io_atomic(self, tmp_path):
        sf = make_share_file()
        path = str(tmp_path / "s.mbcr")
        write_share_file(path, sf)
        assert read_share_file(path) == sf
        assert not [f for f in os.listdir(tmp_path) if f.startswith(".mbcr-tmp")]

    def test_striping_pads_with_zeros(self):
        stripes = file_to_stripes(b"abc", 2)
        assert stripes == [(97, 98), (99, 0)]
        assert stripes_to_file(stripes, 3) == b"abc"

    def test_empty_file_is_one_zero_stripe(self):
        stripes = file_to_stripes(b"", 12)
        assert stripes == [(0,) * 12]
        assert stripes_to_file(stripes, 0) == b""


class TestCli:
    def encode(self, tmp_path, data, n=5, k=2, d=3, r=2):
        src = tmp_path / "input.bin"
        src.write_bytes(data)
        out = tmp_path / "shares"
        rc = main(
            ["encode", "-n", str(n), "-k", str(k), "-d", str(d), "-r", str(r),
             str(src), "--out", str(out)]
        )
        assert rc == 0
        return out

    def test_params_ok(self, capsys):
        assert main(["params", "-n", "5", "-k", "2", "-d", "3", "-r", "2"]) == 0
        out = capsys.readouterr().out
        assert "block size (B)            : 12" in out
        assert "repair bandwidth (gamma)  : 7" in out

    def test_params_k_gt_d_is_usage_error(self, capsys):
        assert main(["params", "-n", "4", "-k", "3", "-d", "2", "-r", "2"]) == 2
        assert "k = 3 > d = 2" in capsys.readouterr().err

    def test_params_larger_example(self, capsys):
        assert main(["params", "-n", "10", "-k", "3", "-d", "5", "-r", "3"]) == 0
        out = capsys.readouterr().out
        assert "block size (B)            : 30" in out
        assert "share size (alpha)        : 12" in out

    def test_encode_share_file_sizes(self, tmp_path):
        out = self.encode(tmp_path, bytes(range(24)))
        files = sorted(os.listdir(out))
        assert files == [f"share_{i:03d}.mbcr" for i in range(1, 6)]
        for f in files:
            sf = read_share_file(str(out / f))
            assert sf.stripe_count == 2
            assert len(sf.payload) == 14

    def test_encode_reconstruct_round_trip(self, tmp_path):
        data = bytes(random.Random(0).randrange(256) for _ in range(100))
        out = self.encode(tmp_path, data)
        dest = tmp_path / "rec.bin"
        rc = main(
            ["reconstruct", str(out / "share_002.mbcr"), str(out / "share_004.mbcr"),
             "--out", str(dest)]
        )
        assert rc == 0
        assert dest.read_bytes() == data

    def test_reconstruct_with_too_few_shares(self, tmp_path, capsys):
        out = self.encode(tmp_path, b"hello world")
        rc = main(
            ["reconstruct", str(out / "share_001.mbcr"), "--out", str(tmp_path / "x")]
        )
        assert rc == 2
        assert "at least k" in capsys.readouterr().err

    def test_reconstruct_with_mismatched_headers(self, tmp_path, capsys):
        out1 = self.encode(tmp_path, b"abc")
        tmp2 = tmp_path / "other"
        tmp2.mkdir()
        out2 = self.encode(tmp2, b"abc", n=6, k=2, d=3, r=2)
        rc = main(
            ["reconstruct", str(out1 / "share_001.mbcr"), str(out2 / "share_002.mbcr"),
             "--out", str(tmp_path / "x")]
        )
        assert rc == 2
        assert "mismatched" in capsys.readouterr().err

    def test_repair_regenerates_identical_files(self, tmp_path, capsys):
        out = self.encode(tmp_path, bytes(range(30)))
        rep = tmp_path / "repaired"
        survivors = [str(out / f"share_{i:03d}.mbcr") for i in (3, 4, 5)]
        rc = main(["repair", *survivors, "--failed", "1,2", "--seed", "9",
                   "--out", str(rep)])
        assert rc == 0
        for i in (1, 2):
            orig = (out / f"share_{i:03d}.mbcr").read_bytes()
            assert (rep / f"share_{i:03d}.mbcr").read_bytes() == orig
        text = capsys.readouterr().out
        assert "= 7 symbols/stripe" in text
        assert "system total: 14 symbols/stripe" in text

    def test_repair_with_explicit_helpers(self, tmp_path):
        out = self.encode(tmp_path, b"x" * 12, n=7, k=2, d=3, r=2)
        rep = tmp_path / "repaired"
        survivors = [str(out / f"share_{i:03d}.mbcr") for i in (3, 4, 5, 6, 7)]
        rc = main(["repair", *survivors, "--failed", "1,2",
                   "--helpers", "1:3+4+5;2:4+5+6", "--out", str(rep)])
        assert rc == 0
        assert (rep / "share_001.mbcr").read_bytes() == (
            out / "share_001.mbcr"
        ).read_bytes()

    def test_repair_wrong_failed_count(self, tmp_path, capsys):
        out = self.encode(tmp_path, b"abcdef")
        rc = main(["repair", str(out / "share_003.mbcr"), str(out / "share_004.mbcr"),
                   str(out / "share_005.mbcr"), "--failed", "1",
                   "--out", str(tmp_path / "r")])
        assert rc == 2
        assert "exactly r" in capsys.readouterr().err

    def test_verify_passes(self, capsys):
        rc = main(["verify", "-n", "5", "-k", "2", "-d", "3", "-r", "2", "-q", "7"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert "CHECK cutset_bound_equality" in out

    def test_verify_fault_injection_fails(self, capsys):
        rc = main(["verify", "-n", "5", "-k", "2", "-d", "3", "-r", "2", "-q", "7",
                   "--inject-fault"])
        assert rc == 1
        assert "FAIL" in capsys.readouterr().out

    def test_bound_command(self, capsys):
        assert main(["bound", "-n", "5", "-k", "2", "-d", "3", "-r", "2"]) == 0
        out = capsys.readouterr().out
        assert "cut-set max file size at MBCR point: 12" in out
        assert "bound met with equality: True" in out

    def test_simulate_twenty_stages(self, capsys):
        rc = main(["simulate", "-n", "5", "-k", "2", "-d", "3", "-r", "2",
                   "--stages", "20", "--seed", "3"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "cumulative repair bandwidth: 280" in out

    def test_simulate_r1_no_phase2(self, capsys):
        rc = main(["simulate", "-n", "4", "-k", "2", "-d", "2", "-r", "1",
                   "--stages", "1", "--seed", "0"])
        assert rc == 0
        # gamma = 2d + r - 1 = 4, one newcomer, one stage
        assert "cumulative repair bandwidth: 4" in capsys.readouterr().out

    def test_seed_determinism(self, tmp_path, capsys):
        out = self.encode(tmp_path, bytes(range(40)))
        survivors = [str(out / f"share_{i:03d}.mbcr") for i in (2, 3, 5)]
        r1, r2 = tmp_path / "r1", tmp_path / "r2"
        for rep in (r1, r2):
            rc = main(["repair", *survivors, "--failed", "1,4", "--seed", "11",
                       "--out", str(rep)])
            assert rc == 0
        for name in os.listdir(r1):
            assert (r1 / name).read_bytes() == (r2 / name).read_bytes()

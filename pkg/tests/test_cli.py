"""Command line behavior: exit codes, validate output, export determinism."""

from __future__ import annotations

import argparse
import json
import socket

import pytest

from courtcast.cli import _parse_bind, _parse_layers, main
from courtcast.model import ALL_LAYERS, LayerId
from courtcast.stream import Frame, decode
from courtcast.synth import SynthConfig, write_fixture


class TestArgParsing:
    def test_layers_all(self):
        assert _parse_layers("all") == frozenset(ALL_LAYERS)

    @pytest.mark.parametrize("raw", ["", "none", "  NONE  "])
    def test_layers_empty(self, raw):
        assert _parse_layers(raw) == frozenset()

    def test_layers_csv_case_insensitive(self):
        got = _parse_layers(" defense, Shot_Chart ")
        assert got == frozenset({LayerId.DEFENSE, LayerId.SHOT_CHART})

    def test_layers_unknown_rejected(self):
        with pytest.raises(argparse.ArgumentTypeError, match="bogus"):
            _parse_layers("defense,bogus")

    def test_bind_host_port(self):
        assert _parse_bind("0.0.0.0:9000") == ("0.0.0.0", 9000)

    def test_bind_defaults_host(self):
        assert _parse_bind(":8080") == ("127.0.0.1", 8080)

    @pytest.mark.parametrize("raw", ["nohost", "host:abc", "host:"])
    def test_bind_malformed(self, raw):
        with pytest.raises(argparse.ArgumentTypeError):
            _parse_bind(raw)

    def test_missing_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_layer_flag_is_usage_error(self, manifest_path, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(
                [
                    "export",
                    "--manifest",
                    str(manifest_path),
                    "--from-ms",
                    "0",
                    "--to-ms",
                    "100",
                    "--layers",
                    "nope",
                    "--out",
                    str(tmp_path / "x.jsonl"),
                ]
            )
        assert exc.value.code == 2


class TestValidate:
    def test_counts_and_ok(self, manifest_path, dataset, capsys):
        assert main(["validate", "--manifest", str(manifest_path)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert f"tracking: {len(dataset.tracking)} frames" in out
        assert f"events: {len(dataset.events)} records" in out
        assert f"shot_table: {len(dataset.shots.players)} players" in out
        assert out[-1] == "ok"

    def test_corrupt_tracking_line_exits_1(self, tmp_path, capsys):
        fix = tmp_path / "fix"
        manifest = write_fixture(fix, SynthConfig(periods=1, period_s=8.0))
        tracking = fix / "tracking.jsonl"
        lines = tracking.read_text(encoding="utf-8").splitlines()
        lines[2] = '{"oops": tr'
        tracking.write_text("\n".join(lines) + "\n", encoding="utf-8")
        assert main(["validate", "--manifest", str(manifest)]) == 1
        err = capsys.readouterr().err
        assert "MALFORMED_RECORD" in err
        assert "line 3" in err

    def test_missing_manifest_exits_2(self, tmp_path, capsys):
        missing = tmp_path / "nope" / "manifest.json"
        assert main(["validate", "--manifest", str(missing)]) == 2
        assert "error:" in capsys.readouterr().err


def _export_jsonl(manifest_path, out, from_ms, to_ms, layers="all"):
    return main(
        [
            "export",
            "--manifest",
            str(manifest_path),
            "--from-ms",
            str(from_ms),
            "--to-ms",
            str(to_ms),
            "--layers",
            layers,
            "--format",
            "jsonl",
            "--out",
            str(out),
        ]
    )


class TestExport:
    def test_two_runs_byte_identical(self, manifest_path, dataset, tmp_path, capsys):
        t0 = dataset.first_t_ms
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert _export_jsonl(manifest_path, a, t0, t0 + 2000) == 0
        assert _export_jsonl(manifest_path, b, t0, t0 + 2000) == 0
        assert a.read_bytes() == b.read_bytes()
        assert "wrote 50 frames" in capsys.readouterr().out

    def test_two_seconds_at_25hz_is_50_lines(self, manifest_path, dataset, tmp_path):
        out = tmp_path / "clip.jsonl"
        t0 = dataset.first_t_ms
        assert _export_jsonl(manifest_path, out, t0, t0 + 2000) == 0
        lines = out.read_bytes().splitlines()
        assert len(lines) == 50
        for raw in lines:
            msg = decode(raw)
            assert isinstance(msg, Frame)
        first = decode(lines[0])
        assert first.bundle.frame.t_ms == t0

    def test_window_is_half_open(self, manifest_path, dataset, tmp_path):
        out = tmp_path / "edge.jsonl"
        t0 = dataset.first_t_ms
        assert _export_jsonl(manifest_path, out, t0, t0 + 81) == 0
        times = [decode(raw).bundle.frame.t_ms for raw in out.read_bytes().splitlines()]
        assert times == [t0, t0 + 40, t0 + 80]

    def test_layers_none_exports_bare_frames(self, manifest_path, dataset, tmp_path):
        out = tmp_path / "bare.jsonl"
        t0 = dataset.first_t_ms
        assert _export_jsonl(manifest_path, out, t0, t0 + 200, layers="none") == 0
        for raw in out.read_bytes().splitlines():
            assert decode(raw).bundle.layers == {}

    def test_invalid_range_exits_2(self, manifest_path, tmp_path, capsys):
        assert _export_jsonl(manifest_path, tmp_path / "x.jsonl", 2000, 1000) == 2
        assert "INVALID_RANGE" in capsys.readouterr().err

    def test_svg_writes_one_file_per_frame(self, manifest_path, dataset, tmp_path, capsys):
        out = tmp_path / "svgs"
        t0 = dataset.first_t_ms
        code = main(
            [
                "export",
                "--manifest",
                str(manifest_path),
                "--from-ms",
                str(t0),
                "--to-ms",
                str(t0 + 400),
                "--format",
                "svg",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        files = sorted(out.glob("frame_*.svg"))
        assert len(files) == 10
        assert files[0].name == f"frame_{t0:08d}.svg"
        for f in files:
            assert f.read_text(encoding="utf-8").lstrip().startswith("<svg")
        assert "wrote 10 SVG files" in capsys.readouterr().out


class TestServe:
    def test_bind_failure_exits_2(self, manifest_path, capsys):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        try:
            blocker.bind(("127.0.0.1", 0))
            blocker.listen(1)
            port = blocker.getsockname()[1]
            code = main(
                [
                    "serve",
                    "--manifest",
                    str(manifest_path),
                    "--bind",
                    f"127.0.0.1:{port}",
                ]
            )
        finally:
            blocker.close()
        assert code == 2
        assert "BIND_FAILURE" in capsys.readouterr().err


def test_manifest_round_trip_sanity(manifest_path):
    # the fixture manifest is plain JSON with relative data paths
    doc = json.loads(manifest_path.read_text(encoding="utf-8"))
    assert doc["tracking"].endswith(".jsonl")
    assert doc["frame_rate_hz"] == 25

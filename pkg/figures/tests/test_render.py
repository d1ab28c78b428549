import subprocess
import sys
from pathlib import Path

import pytest

from tmemu_figures import FigureError, FigureSpec, boxplot_stats, median, render


def write(path: Path, text: str) -> str:
    path.write_text(text)
    return str(path)


COUNTS_CSV = """\
# tmemu 0.1.0
# config_hash=abc seed=1
group,emulator_index,emulator_rule,raw_count,distinct_count
bb,0,42,10,3
random,0,7,2,1
random,1,8,4,2
random,2,9,0,0
"""

BEHAVIOUR_CSV = """\
# tmemu 0.1.0
# config_hash=abc seed=1
input,outcome,steps,compressed_length
1,halted,3,17
2,halted,5,18
3,halted,9,30
4,max-steps,50,31
5,max-steps,50,33
"""

FUNCTION_CSV = """\
# tmemu 0.1.0
# config_hash=abc seed=1
input,output,outcome
1,1,halted
2,10,halted
3,,max-steps
"""


class TestMedian:
    def test_odd(self):
        assert median([3.0, 1.0, 2.0]) == 2.0

    def test_even(self):
        assert median([1.0, 2.0, 3.0, 4.0]) == 2.5

    def test_empty_rejected(self):
        with pytest.raises(FigureError):
            median([])


class TestBoxplotStats:
    def test_groups_and_medians(self, tmp_path):
        path = write(tmp_path / "counts.csv", COUNTS_CSV)
        stats = boxplot_stats(path)
        assert list(stats) == ["bb", "random"]
        assert stats["bb"]["median_raw"] == 10.0
        assert stats["random"]["median_raw"] == 2.0
        assert stats["random"]["mean_distinct"] == 1.0

    def test_missing_column_named_in_error(self, tmp_path):
        path = write(tmp_path / "c.csv", "group,raw_count\nbb,1\n")
        with pytest.raises(FigureError, match="distinct_count"):
            boxplot_stats(path)


class TestRender:
    def test_empty_csv_no_file_written(self, tmp_path):
        path = write(tmp_path / "empty.csv", "input,outcome,steps,compressed_length\n")
        spec = FigureSpec(path, "histogram", str(tmp_path / "h.png"))
        with pytest.raises(FigureError, match="no data rows"):
            render(spec)
        assert not (tmp_path / "h.png").exists()

    def test_unknown_kind(self, tmp_path):
        path = write(tmp_path / "b.csv", BEHAVIOUR_CSV)
        with pytest.raises(FigureError, match="kind"):
            render(FigureSpec(path, "pie", str(tmp_path / "p.png")))

    def test_histogram_written(self, tmp_path):
        path = write(tmp_path / "behaviour.csv", BEHAVIOUR_CSV)
        out = render(FigureSpec(path, "histogram", str(tmp_path / "h.png")))
        assert Path(out).stat().st_size > 0

    def test_boxplot_written(self, tmp_path):
        path = write(tmp_path / "counts.csv", COUNTS_CSV)
        out = render(FigureSpec(path, "boxplot", str(tmp_path / "b.png")))
        assert Path(out).stat().st_size > 0

    def test_function_plot_written(self, tmp_path):
        path = write(tmp_path / "function.csv", FUNCTION_CSV)
        out = render(FigureSpec(path, "function-plot", str(tmp_path / "f.svg")))
        assert Path(out).stat().st_size > 0

    def test_rendering_leaves_csv_unchanged_and_stats_stable(self, tmp_path):
        path = write(tmp_path / "counts.csv", COUNTS_CSV)
        before = Path(path).read_bytes()
        first = boxplot_stats(path)
        render(FigureSpec(path, "boxplot", str(tmp_path / "b1.png")))
        render(FigureSpec(path, "boxplot", str(tmp_path / "b2.png")))
        assert Path(path).read_bytes() == before
        assert boxplot_stats(path) == first


class TestCli:
    def test_batch_render(self, tmp_path):
        counts = write(tmp_path / "counts.csv", COUNTS_CSV)
        behaviour = write(tmp_path / "behaviour.csv", BEHAVIOUR_CSV)
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "tmemu_figures.cli",
                f"boxplot={counts}",
                f"histogram={behaviour}",
                "--out-dir",
                str(tmp_path / "figs"),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "figs" / "boxplot-counts.png").exists()
        assert (tmp_path / "figs" / "histogram-behaviour.png").exists()

    def test_missing_file_exit_code(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "tmemu_figures.cli", "histogram=/no/such.csv"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 3
        assert "error" in proc.stderr

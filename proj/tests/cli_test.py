# Copyright 2026 The RRA Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the rra command line: exit codes and flag precedence."""

import filecmp
import pathlib
import subprocess
import sys
import tempfile
import unittest

RRA = None

TINY = ["seq_length=10", "train_size=20", "test_size=10", "batch=10",
        "eval_batch=10", "eval_interval=2"]


def run(*args):
    return subprocess.run([RRA, *map(str, args)], capture_output=True,
                          text=True, timeout=300)


class ExitCodes(unittest.TestCase):
    def test_help_is_success(self):
        self.assertEqual(run("--help").returncode, 0)

    def test_missing_subcommand_is_usage(self):
        self.assertEqual(run().returncode, 1)

    def test_unknown_flag_is_usage(self):
        self.assertEqual(run("train", "--bogus", "1").returncode, 1)

    def test_bad_config_value_is_usage(self):
        r = run("train", "--task", "adding", "--set", "hidden=zero")
        self.assertEqual(r.returncode, 1, r.stderr)

    def test_unknown_task_is_usage(self):
        self.assertEqual(run("train", "--task", "sorting").returncode, 1)

    def test_missing_mnist_is_data_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            r = run("train", "--task", "mnist", "--out", tmp, "--set",
                    f"mnist_train_images={tmp}/none",
                    f"mnist_train_labels={tmp}/none",
                    f"mnist_test_images={tmp}/none",
                    f"mnist_test_labels={tmp}/none")
        self.assertEqual(r.returncode, 2, r.stderr)

    def test_missing_checkpoint_is_data_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            r = run("eval", "--task", "adding", "--checkpoint",
                    f"{tmp}/missing.bin", "--set", *TINY)
        self.assertEqual(r.returncode, 2, r.stderr)

    def test_failed_gradcheck_is_numeric(self):
        r = run("gradcheck", "--tolerance", "0")
        self.assertEqual(r.returncode, 3, r.stdout)
        self.assertIn("FAIL", r.stdout)

    def test_gradcheck_passes(self):
        r = run("gradcheck", "--seed", 0, 1, 2)
        self.assertEqual(r.returncode, 0, r.stdout)
        self.assertIn("PASS", r.stdout)


class Precedence(unittest.TestCase):
    """Config file < --set < dedicated flags, checked via checkpoint bytes."""

    def train(self, out, *args):
        r = run("train", "--task", "adding", "--iters", 4, "--out", out,
                *args)
        self.assertEqual(r.returncode, 0, r.stderr)
        return pathlib.Path(out) / "checkpoint.bin"

    def test_layers(self):
        with tempfile.TemporaryDirectory() as tmp:
            tmp = pathlib.Path(tmp)
            cfg = tmp / "run.cfg"
            cfg.write_text("# file layer\nhidden = 8\nseed = 1\nwindow = 2\n")
            ref = self.train(tmp / "ref", "--hidden", 5, "--seed", 2,
                             "--k", 3, "--set", *TINY)
            layered = self.train(tmp / "layered", "--config", cfg,
                                 "--hidden", 5, "--seed", 2,
                                 "--set", "hidden=6", "window=3", *TINY)
            self.assertTrue(filecmp.cmp(ref, layered, shallow=False))
            # --set overrides the file when no dedicated flag is given.
            via_set = self.train(tmp / "via_set", "--config", cfg,
                                 "--seed", 2, "--set", "hidden=5", "window=3",
                                 *TINY)
            self.assertTrue(filecmp.cmp(ref, via_set, shallow=False))
            # The file alone gives a different model.
            file_only = self.train(tmp / "file_only", "--config", cfg,
                                   "--set", *TINY)
            self.assertFalse(filecmp.cmp(ref, file_only, shallow=False))

    def test_export_attention(self):
        with tempfile.TemporaryDirectory() as tmp:
            tmp = pathlib.Path(tmp)
            self.train(tmp / "run", "--k", 4, "--set", *TINY)
            r = run("export-attention", tmp / "run" / "metrics.csv")
            self.assertEqual(r.returncode, 0, r.stderr)
            lines = r.stdout.splitlines()
            self.assertEqual(lines[0], "iteration,attn_0,attn_1,attn_2,attn_3")
            self.assertEqual(len(lines), 5)
            for line in lines[1:]:
                total = sum(float(v) for v in line.split(",")[1:])
                self.assertAlmostEqual(total, 1.0, delta=1e-9)
            lstm = tmp / "lstm"
            self.train(lstm, "--cell", "lstm", "--set", *TINY)
            r = run("export-attention", lstm / "metrics.csv")
            self.assertNotEqual(r.returncode, 0)


if __name__ == "__main__":
    RRA = sys.argv.pop(1)
    unittest.main()

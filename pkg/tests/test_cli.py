"""
Unit tests for the qnc command line entry point.
"""

import unittest
from unittest.mock import patch
import sys
import os
import io
import json
import tempfile

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from quantum_network_code.cli import main
from quantum_network_code.config import config_hash, network_to_config
from quantum_network_code.constructions import worst_case_network
from quantum_network_code.finite_field import FieldSpec


class CliTestCase(unittest.TestCase):
    """Temporary directory plus helpers to write configs and run main."""

    def setUp(self):
        """Create a scratch directory."""
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write_config(self, data, name="scenario.json"):
        path = os.path.join(self.tmp.name, name)
        with open(path, "w") as f:
            json.dump(data, f)
        return path

    def run_cli(self, command, config_path, *extra, out_name="report.json"):
        """Run main with --quiet and --out; returns (exit code, parsed output, stderr text)."""
        out = os.path.join(self.tmp.name, out_name)
        stderr = io.StringIO()
        with patch("sys.stderr", stderr):
            code = main([command, "--config", config_path, "--out", out, "--quiet", *extra])
        report = None
        if os.path.exists(out):
            with open(out) as f:
                report = json.load(f)
        return code, report, stderr.getvalue()

    def worst_case_scenario(self, m0=4, m1=2):
        return {
            "field": {"p": 2},
            "network": network_to_config(worst_case_network(m0, m1, FieldSpec(2))),
            "seed": 0,
        }


class TestConstruct(CliTestCase):
    """Test the construct and gen commands."""

    def test_construct_worst_case(self):
        """Test the worst-case network reports a one-bit rate."""
        data = self.worst_case_scenario()
        code, report, _ = self.run_cli("construct", self.write_config(data))
        self.assertEqual(code, 0)
        self.assertEqual(report["tool"], "qnc")
        self.assertEqual(report["command"], "construct")
        self.assertEqual(report["verdict"], "pass")
        self.assertEqual(report["config_hash"], config_hash(data))
        self.assertAlmostEqual(report["result"]["rate_bits"], 1.0)
        self.assertEqual(report["result"]["m_star_star"], 3)

    def test_reports_are_deterministic(self):
        """Test two runs of the same scenario write identical bytes."""
        path = self.write_config(self.worst_case_scenario())
        self.run_cli("construct", path, out_name="a.json")
        self.run_cli("construct", path, out_name="b.json")
        with open(os.path.join(self.tmp.name, "a.json"), "rb") as a, open(os.path.join(self.tmp.name, "b.json"), "rb") as b:
            self.assertEqual(a.read(), b.read())

    def test_no_capacity_is_input_error(self):
        """Test m_** = m0 exits with code 2."""
        code, report, err = self.run_cli("construct", self.write_config(self.worst_case_scenario(3, 2)))
        self.assertEqual(code, 2)
        self.assertIsNone(report)
        self.assertIn("❌ Error", err)

    def test_gen_then_construct(self):
        """Test the generated scenario is accepted by construct."""
        gen_config = self.write_config({"field": {"p": 2}, "generator": {"m0": 4, "m1": 2, "triple": [2, 2, 1]}})
        code, document, _ = self.run_cli("gen", gen_config, out_name="generated.json")
        self.assertEqual(code, 0)
        self.assertEqual(document["experiment"], "construct")
        self.assertEqual(document["generator"]["l3"], 1)

        generated = os.path.join(self.tmp.name, "generated.json")
        code, report, _ = self.run_cli("construct", generated)
        self.assertEqual(code, 0)
        self.assertEqual(report["result"]["m_star"], 1)
        self.assertEqual(report["result"]["m_star_star"], 3)

    def test_gen_invalid_triple(self):
        """Test l3 = 0 exits with code 2."""
        path = self.write_config({"field": {"p": 2}, "generator": {"m0": 4, "m1": 2, "triple": [2, 2, 0]}})
        code, _, _ = self.run_cli("gen", path)
        self.assertEqual(code, 2)


class TestInputErrors(CliTestCase):
    """Test malformed input handling."""

    def test_malformed_json(self):
        """Test invalid JSON exits with code 2."""
        path = os.path.join(self.tmp.name, "broken.json")
        with open(path, "w") as f:
            f.write("{not json")
        code, report, err = self.run_cli("construct", path)
        self.assertEqual(code, 2)
        self.assertIsNone(report)
        self.assertIn("invalid JSON", err)

    def test_missing_section(self):
        """Test verify-classical without its section exits with code 2."""
        code, _, err = self.run_cli("verify-classical", self.write_config({"field": {"p": 2}}))
        self.assertEqual(code, 2)
        self.assertIn("classical", err)

    def test_bad_sample_override(self):
        """Test --samples 0 exits with code 2."""
        code, _, _ = self.run_cli("construct", self.write_config(self.worst_case_scenario()), "--samples", "0")
        self.assertEqual(code, 2)


class TestVerifyCommands(CliTestCase):
    """Test the simulation and verification commands end to end."""

    def test_simulate_adaptive(self):
        """Test adaptive adversaries leave the message intact."""
        data = self.worst_case_scenario()
        data["corruption"] = {"mode": "adaptive", "memory_dim": 2}
        code, report, _ = self.run_cli("simulate", self.write_config(data), "--samples", "2")
        self.assertEqual(code, 0)
        self.assertEqual(len(report["result"]["fidelities"]), 2)
        self.assertGreaterEqual(report["result"]["min_fidelity"], 1.0 - 1e-9)

    def test_verify_converse(self):
        """Test the converse check passes on the worst-case network."""
        code, report, _ = self.run_cli("verify-converse", self.write_config(self.worst_case_scenario()))
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report["result"]["value_bits"], 1.0, places=6)

    def test_verify_direct(self):
        """Test random dense networks meet the direct bound."""
        path = self.write_config({"field": {"p": 2}, "direct": {"m0": 3, "m1": 1}, "samples": 3})
        code, report, _ = self.run_cli("verify-direct", path)
        self.assertEqual(code, 0)
        self.assertEqual(len(report["result"]["reports"]), 3)
        self.assertAlmostEqual(report["result"]["bound_bits"], 2.0)

    def test_verify_classical(self):
        """Test random classical networks meet the (m0 - m1) log d bound."""
        path = self.write_config({"field": {"p": 2}, "classical": {"d": 2, "m0": 2, "m1": 1}, "samples": 4})
        code, report, _ = self.run_cli("verify-classical", path)
        self.assertEqual(code, 0)
        self.assertEqual(report["result"]["failing_seeds"], [])

    def test_verify_eb(self):
        """Test Fourier pinching x identity never beats one bit."""
        path = self.write_config({"field": {"p": 2}, "samples": 5})
        code, report, _ = self.run_cli("verify-eb", path, "--seed", "4")
        self.assertEqual(code, 0)
        self.assertEqual(report["seed"], 4)
        self.assertEqual(report["result"]["details"]["violations"], 0)



class TestVerifyByExperiment(CliTestCase):
    """Test qnc verify runs the experiment named in the scenario."""

    def test_experiment_dispatch(self):
        """Test verify with experiment verify-converse matches the direct command."""
        data = dict(self.worst_case_scenario(), experiment="verify-converse")
        code, report, _ = self.run_cli("verify", self.write_config(data))
        self.assertEqual(code, 0)
        self.assertEqual(report["command"], "verify")
        self.assertEqual(report["result"]["experiment"], "verify-converse")
        self.assertAlmostEqual(report["result"]["value_bits"], 1.0, places=6)

    def test_missing_experiment_is_input_error(self):
        """Test a scenario without an experiment exits with code 2."""
        code, _, stderr = self.run_cli("verify", self.write_config(self.worst_case_scenario()))
        self.assertEqual(code, 2)
        self.assertIn("experiment", stderr)

    def test_non_verification_experiment_rejected(self):
        """Test experiment construct is not accepted by verify."""
        data = dict(self.worst_case_scenario(), experiment="construct")
        code, _, _ = self.run_cli("verify", self.write_config(data))
        self.assertEqual(code, 2)


if __name__ == '__main__':
    unittest.main()

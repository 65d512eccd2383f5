#!/usr/bin/env python3
"""
Command line entry point.

    qnc construct|simulate|verify-direct|verify-converse|verify-classical|verify-eb|verify|gen
        --config scenario.json [--out report.json] [--seed N] [--samples N] [--quiet] [-v]

Exit codes: 0 every verdict passed, 1 a verdict failed, 2 invalid input.
"""

import argparse
import json
import sys
from typing import Callable, Dict, Tuple

import numpy as np

from . import __version__
from .capacity import (classical_bound_check, eb_coherent_check, fourier_pinching, random_kernel,
                       random_linear_maps, verify_converse, verify_direct_bound)
from .codeplan import plan_code
from .config import ScenarioConfig, config_hash, load_config, network_to_config, triple_from_generator, as_int
from .constructions import gen_lemma_l1, identity_network, random_clifford_network, random_unitary_network
from .errors import INPUT_ERRORS, ConfigError, ConverseMismatch, QncError
from .feedback import ConsoleFeedback, configure_logging
from .network import CorruptionModel, DagNetwork, LayeredNetwork, reorganize
from .simulate import KrausChannel, entanglement_fidelity, random_adversary, random_kraus

TOOL_NAME = "qnc"
FIDELITY_TOL = 1e-9


#
# --- Helper Function: Shared Setup ---
#

def _layered(cfg: ScenarioConfig, feedback) -> LayeredNetwork:
    if cfg.network is None:
        raise ConfigError("network: missing")
    if isinstance(cfg.network, DagNetwork):
        return reorganize(cfg.network, feedback)
    return cfg.network


def _section(cfg: ScenarioConfig, name: str) -> dict:
    section = getattr(cfg, name)
    if section is None:
        raise ConfigError(f"{name}: missing")
    return section


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _sample_corruption(cfg: ScenarioConfig, net: LayeredNetwork, rng: np.random.Generator) -> CorruptionModel:
    settings = cfg.corruption
    q = net.spec.q
    if settings.mode == "adaptive":
        return CorruptionModel.adaptive(random_adversary(q, settings.memory_dim, net.m1, rng, settings.pure_memory))
    if settings.mode == "individual":
        return CorruptionModel.individual([random_kraus(q, settings.kraus_count, rng) for _ in range(net.m1)])
    if settings.mode == "mix":
        return CorruptionModel.mix_substitution()
    return CorruptionModel.none()


#
# --- Commands ---
#

def cmd_construct(cfg: ScenarioConfig, feedback) -> Tuple[dict, str]:
    """Builds the code plan and reports m_*, m_** and the rate."""
    net = _layered(cfg, feedback)
    plan = plan_code(net, cfg.rho0, feedback)
    result = plan.to_dict(net.spec)
    result["corrupted_edges"] = net.corrupted_edges
    feedback.pushConsoleInfo(f"✓ Rate: {plan.rate_bits:.6f} bits = {plan.rate_log_q} log q")
    return result, "pass"


def cmd_simulate(cfg: ScenarioConfig, feedback) -> Tuple[dict, str]:
    """Entanglement fidelity of the code against sampled adversaries."""
    net = _layered(cfg, feedback)
    plan = plan_code(net, cfg.rho0, feedback)
    feedback.pushConsoleInfo(f"--- Simulation ({cfg.corruption.mode}, {cfg.samples} samples) ---")

    fidelities, failing = [], []
    for k in range(cfg.samples):
        if feedback.isCanceled():
            break
        seed = cfg.seed + k
        corruption = _sample_corruption(cfg, net, np.random.default_rng(seed))
        fidelity = entanglement_fidelity(plan, net, corruption)
        fidelities.append(fidelity)
        if fidelity < 1.0 - FIDELITY_TOL:
            failing.append({"seed": seed, "fidelity": fidelity})
            feedback.pushWarning(f"seed {seed}: fidelity {fidelity:.12f}")

    ok = not failing and len(fidelities) == cfg.samples
    min_fidelity = min(fidelities) if fidelities else None
    if min_fidelity is not None:
        feedback.pushConsoleInfo(f"{'✓' if ok else '⚠'} Minimum fidelity: {min_fidelity:.12f}")
    result = {
        "mode": cfg.corruption.mode,
        "rate_bits": plan.rate_bits,
        "fidelities": fidelities,
        "min_fidelity": min_fidelity,
        "failing": failing,
    }
    return result, _verdict(ok)


def _direct_network(cfg: ScenarioConfig, rng: np.random.Generator, feedback) -> LayeredNetwork:
    if cfg.network is not None:
        return _layered(cfg, feedback)
    direct = _section(cfg, "direct")
    m0 = as_int(direct.get("m0", 3), "direct.m0", 1)
    m1 = as_int(direct.get("m1", 1), "direct.m1", 0)
    kind = direct.get("layers", "dense")
    if kind == "dense":
        return random_unitary_network(m0, m1, cfg.spec, rng)
    if kind == "clifford":
        return random_clifford_network(m0, m1, cfg.spec, rng)
    if kind == "identity":
        return identity_network(m0, m1, cfg.spec)
    raise ConfigError(f"direct.layers: unknown layer family '{kind}'")


def cmd_verify_direct(cfg: ScenarioConfig, feedback) -> Tuple[dict, str]:
    """Coherent information against the (m0 - 2 m1 + 1) log q bound for random corruptions."""
    direct = cfg.direct or {}
    kraus_count = as_int(direct.get("kraus_count", cfg.corruption.kraus_count), "direct.kraus_count", 1)
    feedback.pushConsoleInfo(f"--- Direct bound ({cfg.samples} samples) ---")

    reports, failing = [], []
    for k in range(cfg.samples):
        if feedback.isCanceled():
            break
        seed = cfg.seed + k
        rng = np.random.default_rng(seed)
        net = _direct_network(cfg, rng, feedback)
        gammas = [random_kraus(net.spec.q, kraus_count, rng) for _ in range(net.m1)]
        report = verify_direct_bound(net, gammas, seed=seed, feedback=feedback)
        reports.append(report.to_dict())
        if not report.passed:
            failing.append(seed)

    ok = not failing and len(reports) == cfg.samples
    values = [r["value_bits"] for r in reports]
    result = {
        "bound_bits": reports[0]["bound_bits"] if reports else None,
        "min_value_bits": min(values) if values else None,
        "reports": reports,
        "failing_seeds": failing,
    }
    return result, _verdict(ok)


def cmd_verify_converse(cfg: ScenarioConfig, feedback) -> Tuple[dict, str]:
    """Decoded mix-substitution channel factorization and its coherent information."""
    net = _layered(cfg, feedback)
    plan = plan_code(net, cfg.rho0, feedback)
    feedback.pushConsoleInfo("--- Converse ---")
    try:
        report = verify_converse(plan, net, feedback)
    except ConverseMismatch as e:
        feedback.pushWarning(str(e))
        return {"error": str(e), "rate_bits": plan.rate_bits}, "fail"
    return report.to_dict(), report.verdict


def cmd_verify_classical(cfg: ScenarioConfig, feedback) -> Tuple[dict, str]:
    """Exact mutual information of random classical networks with corrupted coordinate 1."""
    classical = _section(cfg, "classical")
    d = as_int(classical.get("d", 2), "classical.d", 2)
    m0 = as_int(classical.get("m0", 2), "classical.m0", 1)
    m1 = as_int(classical.get("m1", 1), "classical.m1", 0)
    maps = classical.get("maps", "random")
    kernel = classical.get("kernel", "random")
    if maps not in ("random", "linear", "identity"):
        raise ConfigError(f"classical.maps: unknown map family '{maps}'")
    if kernel not in ("random", "erase", "identity"):
        raise ConfigError(f"classical.kernel: unknown kernel family '{kernel}'")
    feedback.pushConsoleInfo(f"--- Classical bound (d={d}, m0={m0}, m1={m1}, {cfg.samples} samples) ---")

    N = d ** m0
    reports, failing = [], []
    for k in range(cfg.samples):
        seed = cfg.seed + k
        rng = np.random.default_rng(seed)
        if maps == "linear":
            f_list = random_linear_maps(d, m0, m1 + 1, rng)
        elif maps == "random":
            f_list = [rng.permutation(N).tolist() for _ in range(m1 + 1)]
        else:
            f_list = [list(range(N)) for _ in range(m1 + 1)]
        if kernel == "random":
            kernels = [random_kernel(d, rng) for _ in range(m1)]
        elif kernel == "erase":
            kernels = [np.full((d, d), 1.0 / d) for _ in range(m1)]
        else:
            kernels = [np.eye(d) for _ in range(m1)]
        report = classical_bound_check(d, m0, m1, f_list, kernels, seed=seed, feedback=feedback)
        reports.append(report.to_dict())
        if not report.passed:
            failing.append(seed)

    values = [r["value_bits"] for r in reports]
    result = {
        "bound_bits": (m0 - m1) * float(np.log2(d)),
        "min_value_bits": min(values) if values else None,
        "reports": reports,
        "failing_seeds": failing,
    }
    return result, _verdict(not failing)


def cmd_verify_eb(cfg: ScenarioConfig, feedback) -> Tuple[dict, str]:
    """Fourier pinching x channel B never beats channel B alone."""
    eb = cfg.eb or {}
    q = cfg.spec.q
    name = eb.get("channel_b", "identity")
    if name == "identity":
        channel_b, known = KrausChannel.identity(q), float(np.log2(q))
    elif name == "depolarizing":
        channel_b, known = KrausChannel.depolarizing(q), 0.0
    else:
        raise ConfigError(f"eb.channel_b: unknown channel '{name}'")
    feedback.pushConsoleInfo(f"--- Entanglement-breaking check (B = {name}, {cfg.samples} samples) ---")
    report = eb_coherent_check(fourier_pinching(cfg.spec), channel_b, cfg.samples, cfg.seed, known, feedback)
    return report.to_dict(), report.verdict


VERIFICATIONS: Dict[str, Callable] = {
    "simulate": cmd_simulate,
    "verify-direct": cmd_verify_direct,
    "verify-converse": cmd_verify_converse,
    "verify-classical": cmd_verify_classical,
    "verify-eb": cmd_verify_eb,
}


def cmd_verify(cfg: ScenarioConfig, feedback) -> Tuple[dict, str]:
    """Runs the verification named by the scenario's experiment field."""
    if cfg.experiment not in VERIFICATIONS:
        raise ConfigError(f"experiment: expected one of {', '.join(VERIFICATIONS)}, got {cfg.experiment!r}")
    result, verdict = VERIFICATIONS[cfg.experiment](cfg, feedback)
    return {"experiment": cfg.experiment, **result}, verdict


def cmd_gen(cfg: ScenarioConfig, feedback) -> Tuple[dict, str]:
    """Network config for a rank triple; returned document is itself a scenario."""
    triple = triple_from_generator(_section(cfg, "generator"))
    net = gen_lemma_l1(triple, cfg.spec)
    feedback.pushConsoleInfo(f"--- Generated network {triple.to_dict()} ---")
    feedback.pushConsoleInfo(f"  Expected m_*: {triple.m_star}, m_**: {triple.m_star_star}")
    document = {
        "field": cfg.spec.to_dict(),
        "network": network_to_config(net),
        "experiment": "construct",
        "seed": cfg.seed,
        "generator": triple.to_dict(),
    }
    return document, "pass"


COMMANDS: Dict[str, Callable] = {
    "construct": cmd_construct,
    "simulate": cmd_simulate,
    "verify-direct": cmd_verify_direct,
    "verify-converse": cmd_verify_converse,
    "verify-classical": cmd_verify_classical,
    "verify-eb": cmd_verify_eb,
    "verify": cmd_verify,
    "gen": cmd_gen,
}


#
# --- Helper Function: Report Output ---
#

def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="scenario JSON file")
    common.add_argument("--out", help="report path (stdout when omitted)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--samples", type=int, help="override the config sample count")
    common.add_argument("--quiet", action="store_true", help="no progress output")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog=TOOL_NAME, description="Quantum network codes for partially corrupted networks")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__doc__.strip().splitlines()[0])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    feedback = ConsoleFeedback(echo=not args.quiet, stream=sys.stderr)

    try:
        # 1. Config and overrides
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.samples is not None:
            if args.samples < 1:
                raise ConfigError("--samples must be >= 1")
            cfg.samples = args.samples

        # 2. Run
        result, verdict = COMMANDS[args.command](cfg, feedback)
    except INPUT_ERRORS as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return 2
    except QncError as e:
        print(f"❌ Error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1

    # 3. Output: gen writes the generated scenario itself
    if args.command == "gen":
        text = render_report(result)
    else:
        text = render_report({
            "tool": TOOL_NAME,
            "version": __version__,
            "command": args.command,
            "config_hash": config_hash(cfg.raw),
            "seed": cfg.seed,
            "result": result,
            "verdict": verdict,
        })
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        feedback.pushConsoleInfo(f"Report written to: {args.out}")
    else:
        sys.stdout.write(text)

    return 0 if verdict == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())

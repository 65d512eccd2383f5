#!/usr/bin/env python3
"""
Complete pipeline: generate a network, build its code, simulate it and plot the result.

This script:
1. Writes a generator scenario for a rank triple (worst case by default)
2. Runs `qnc gen` to produce the network scenario
3. Runs `qnc construct` and prints m_*, m_** and the rate
4. Runs `qnc simulate` against sampled adversaries
5. Plots the fidelities

Usage:
    python3 pipeline.py [--p 2] [--m0 4] [--m1 2] [--triple L1 L2 L3] [--mode adaptive] [--samples 10] [--out DIR]
"""

import os
import sys
import json
import argparse

# Add parent directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from quantum_network_code.cli import main as qnc
from plot_report import plot_report


def run_step(label, command, config, out, extra=()):
    print(f"\n{label}")
    print(f"{'-'*70}")
    code = qnc([command, '--config', config, '--out', out, *extra])
    if code != 0:
        print(f"\n❌ Error: qnc {command} exited with code {code}")
    return code


def main():
    parser = argparse.ArgumentParser(description='Generate, construct, simulate and plot')
    parser.add_argument('--p', type=int, default=2, help='field characteristic')
    parser.add_argument('--degree', type=int, default=1, help='extension degree')
    parser.add_argument('--m0', type=int, default=4)
    parser.add_argument('--m1', type=int, default=2)
    parser.add_argument('--triple', type=int, nargs=3, metavar=('L1', 'L2', 'L3'),
                        help='rank triple (worst case when omitted)')
    parser.add_argument('--mode', default='adaptive', choices=['adaptive', 'individual', 'mix', 'none'])
    parser.add_argument('--samples', type=int, default=10)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--out', default='qnc_pipeline', help='output directory')
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    paths = {name: os.path.join(args.out, f'{name}.json')
             for name in ('generator', 'scenario', 'construct', 'simulate')}

    print(f"\n{'='*70}")
    print(f"🚀 Pipeline: Generate + Construct + Simulate + Plot")
    print(f"{'='*70}")
    print(f"Field:  GF({args.p}^{args.degree})")
    print(f"Wires:  m0={args.m0}, m1={args.m1}")
    print(f"Output: {args.out}")
    print(f"{'='*70}")

    # Step 1: Generator scenario
    generator = {'m0': args.m0, 'm1': args.m1}
    if args.triple:
        generator['triple'] = list(args.triple)
    else:
        generator['worst_case'] = True
    with open(paths['generator'], 'w', encoding='utf-8') as f:
        json.dump({'field': {'p': args.p, 'degree': args.degree}, 'generator': generator, 'seed': args.seed}, f, indent=2)

    # Step 2: Network
    if run_step("📦 Step 1/4: Generating network...", 'gen', paths['generator'], paths['scenario']):
        return 1

    # Step 3: Code plan
    if run_step("🔧 Step 2/4: Building the code...", 'construct', paths['scenario'], paths['construct']):
        return 1
    with open(paths['construct'], encoding='utf-8') as f:
        plan = json.load(f)['result']
    print(f"\n✓ Code built")
    print(f"   m_*: {plan['m_star']}, m_**: {plan['m_star_star']}")
    print(f"   Rate: {plan['rate_bits']:.4f} bits ({plan['rate_log_q']} registers)")

    # Step 4: Simulation; the corruption section is added to the generated scenario
    with open(paths['scenario'], encoding='utf-8') as f:
        scenario = json.load(f)
    scenario['corruption'] = {'mode': args.mode}
    scenario['samples'] = args.samples
    with open(paths['scenario'], 'w', encoding='utf-8') as f:
        json.dump(scenario, f, indent=2)
    code = run_step(f"🧪 Step 3/4: Simulating {args.samples} {args.mode} adversaries...",
                    'simulate', paths['scenario'], paths['simulate'])
    if code == 2:
        return 1

    # Step 5: Plot
    print(f"\n🎨 Step 4/4: Plotting...")
    print(f"{'-'*70}")
    try:
        plot_report(paths['simulate'])
    except Exception as e:
        print(f"\n❌ Error during plotting: {e}")
        return 1

    print(f"\n{'✓' if code == 0 else '⚠'} Pipeline complete (simulate verdict: {'pass' if code == 0 else 'fail'})")
    return code


if __name__ == '__main__':
    sys.exit(main())

#!/usr/bin/env python3
"""
Plot a qnc report.

Supports the sweep commands:
- simulate: entanglement fidelity per sampled adversary
- verify-direct / verify-classical: measured value per sample against the bound

Usage:
    python3 plot_report.py <report.json> [--show]
"""

import os
import sys
import json

import matplotlib
import numpy as np


def load_report(path):
    """Read a report written by `qnc <command> --out`."""
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def _fidelity_figure(plt, report):
    result = report['result']
    fidelities = np.asarray(result['fidelities'], dtype=float)
    seeds = report['seed'] + np.arange(len(fidelities))

    fig, ax = plt.subplots(figsize=(10, 5))
    # 1 - F on a log axis; exact zeros sit on the floor
    deviation = np.maximum(1.0 - fidelities, 1e-16)
    ax.semilogy(seeds, deviation, 'o', color='tab:blue', label='1 - F')
    ax.axhline(1e-9, color='tab:red', linestyle='--', label='tolerance')
    ax.set_title(f"Entanglement fidelity ({result['mode']} corruption, rate {result['rate_bits']:.3f} bits)",
                 fontsize=13, fontweight='bold')
    ax.set_xlabel('Sample seed')
    ax.set_ylabel('1 - fidelity')
    ax.legend()
    return fig


def _bound_figure(plt, report):
    result = report['result']
    values = np.asarray([r['value_bits'] for r in result['reports']], dtype=float)
    seeds = report['seed'] + np.arange(len(values))
    bound = result['bound_bits']

    fig, ax = plt.subplots(figsize=(10, 5))
    colors = ['tab:green' if r['verdict'] == 'pass' else 'tab:red' for r in result['reports']]
    ax.scatter(seeds, values, c=colors, zorder=3)
    ax.axhline(bound, color='black', linestyle='--', label=f'bound {bound:.3f} bits')
    title = 'Coherent information' if report['command'] == 'verify-direct' else 'Mutual information'
    ax.set_title(f"{title} per sample ({len(values)} samples)", fontsize=13, fontweight='bold')
    ax.set_xlabel('Sample seed')
    ax.set_ylabel('bits')
    ax.legend()
    return fig


PLOTTERS = {
    'simulate': _fidelity_figure,
    'verify-direct': _bound_figure,
    'verify-classical': _bound_figure,
}


def plot_report(report_path, show=False):
    """
    Render a report to `<report>.png` (300 DPI).

    Args:
        report_path: JSON report
        show: also open an interactive window

    Returns:
        str: path of the saved image, or None when the command has no plot
    """
    if not show:
        matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    report = load_report(report_path)
    command = report.get('command')
    plotter = PLOTTERS.get(command)
    if plotter is None:
        print(f"⚠ Nothing to plot for command '{command}'")
        return None

    fig = plotter(plt, report)
    fig.tight_layout()
    output = os.path.splitext(report_path)[0] + '.png'
    fig.savefig(output, dpi=300, bbox_inches='tight', facecolor='white')
    print(f"✓ Saved: {output}")
    if show:
        plt.show()
    plt.close(fig)
    return output


def main():
    args = [a for a in sys.argv[1:] if not a.startswith('--')]
    if len(args) != 1:
        print(f"❌ Error: expected one report file")
        print(f"\n💡 Usage: python3 {os.path.basename(__file__)} <report.json> [--show]")
        return 1
    if not os.path.exists(args[0]):
        print(f"❌ Error: Report not found: {args[0]}")
        return 1
    plot_report(args[0], show='--show' in sys.argv)
    return 0


if __name__ == '__main__':
    sys.exit(main())

"""
Utility script to run the cross-check ladder over the built-in corpus
using multiple processes.
"""

import os
import sys
import argparse
import concurrent.futures
import csv
import logging
import tempfile
import time

from src.cli import configure_logging, parse_cover_sizes
from src.config import Config
from src.cross_check import cross_check_graph, cross_check_voltage
from src.errors import QWZetaError
from src.generators import VOLTAGE_GENERATORS, corpus
from src.graph import Graph
from src.voltage import VoltageGraph

logger = logging.getLogger(__name__)

FIELDNAMES = ['subject', 'kind', 'identity', 'max_residual', 'tolerance', 'passed', 'worst']


def process_item(kind, name, payload, seed, covers, grid):
    """Run the ladder on one corpus member; returns (success, name, rows)"""
    try:
        started = time.time()
        if kind == 'graph':
            report = cross_check_graph(Graph.from_dict(payload), subject=name, seed=seed)
        else:
            report = cross_check_voltage(VoltageGraph.from_dict(payload), subject=name,
                                         seed=seed, covers=covers, grid=grid)
        rows = [{
            'subject': name,
            'kind': kind,
            'identity': check.name,
            'max_residual': f"{check.max_residual:.3e}",
            'tolerance': f"{check.tolerance:.0e}",
            'passed': str(check.passed).lower(),
            'worst': str(check.worst),
        } for check in report.checks.values()]
        print(f"{'✓' if report.passed else '✗'} {name} ({time.time() - started:.1f}s)")
        return report.passed, name, rows
    except QWZetaError as e:
        print(f"✗ {name}: {e}")
        return False, name, [{'subject': name, 'kind': kind, 'identity': e.reason,
                              'max_residual': '', 'tolerance': '', 'passed': 'false',
                              'worst': str(e.details)}]


def write_results(rows, results_dir):
    """Write the results CSV to a temporary file first, then rename"""
    os.makedirs(results_dir, exist_ok=True)
    results_path = os.path.join(results_dir, 'cross_check_results.csv')
    fd, temp_path = tempfile.mkstemp(dir=results_dir, suffix='.csv')
    os.close(fd)
    try:
        with open(temp_path, 'w', newline='', encoding='utf-8') as file:
            writer = csv.DictWriter(file, fieldnames=FIELDNAMES)
            writer.writeheader()
            writer.writerows(rows)
        os.replace(temp_path, results_path)
    except OSError:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise
    print(f"✓ Wrote {len(rows)} rows to {results_path}")
    return results_path


def print_status_summary(results):
    total = len(results)
    passed = sum(1 for success, _ in results if success)

    print("\n--- Status Summary ---")
    print(f"Subjects checked: {total}")
    print(f"All identities passed: {passed}")
    if total > 0:
        print(f"Success rate: {passed/total*100:.1f}%")
    print("----------------------\n")


def build_jobs(seed, include_graphs=True, include_voltage=True):
    jobs = []
    if include_graphs:
        for name, g in corpus(seed=seed).items():
            jobs.append(('graph', name, g.to_dict()))
    if include_voltage:
        for name, make in VOLTAGE_GENERATORS.items():
            jobs.append(('voltage', name, make().to_dict()))
    return jobs


def build_parser(config):
    parser = argparse.ArgumentParser(description='Run the identity ladder over the corpus in parallel')
    parser.add_argument('--max-workers', type=int, default=config.THREADS,
                        help='Maximum number of parallel processes')
    parser.add_argument('--seed', type=int, default=config.SEED,
                        help='Seed for random corpus graphs and parameter draws')
    parser.add_argument('--grid', type=int, default=config.GRID,
                        help='Torus grid size for voltage graph checks')
    parser.add_argument('--L', type=parse_cover_sizes, default='3,4,5,8',
                        help='Cover sizes for the sampling identity, comma-separated')
    parser.add_argument('--graphs-only', action='store_true', help='Skip voltage graphs')
    parser.add_argument('--voltage-only', action='store_true', help='Skip finite graphs')
    parser.add_argument('--results-dir', type=str, default=config.RESULTS_DIR,
                        help='Directory for cross_check_results.csv')
    return parser


def main(argv=None):
    config = Config()
    args = build_parser(config).parse_args(argv)
    configure_logging(config.LOG_LEVEL)
    covers = args.L

    jobs = build_jobs(args.seed, include_graphs=not args.voltage_only,
                      include_voltage=not args.graphs_only)
    if not jobs:
        print("Nothing to check")
        return 1

    print(f"Checking {len(jobs)} subjects with {args.max_workers} parallel workers")
    started = time.time()

    results = []
    rows_by_subject = {}
    with concurrent.futures.ProcessPoolExecutor(max_workers=args.max_workers) as executor:
        futures = {
            executor.submit(process_item, kind, name, payload, args.seed, covers, args.grid): name
            for kind, name, payload in jobs
        }
        for future in concurrent.futures.as_completed(futures):
            success, name, rows = future.result()
            results.append((success, name))
            rows_by_subject[name] = rows

    # Job order, not completion order, so reruns produce identical files
    rows = [row for _, name, _ in jobs for row in rows_by_subject[name]]
    write_results(rows, args.results_dir)

    print(f"\n=== Final Status ({time.time() - started:.1f}s) ===")
    print_status_summary(results)

    failed = sorted(name for success, name in results if not success)
    if failed:
        print("Failed subjects:")
        for name in failed:
            print(f"  - {name}")
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: scenario files, blocklength sweeps and figure data.

    adkey sweep --config sweep.json [--threads K]
    adkey fig1 --out fig1.csv
    adkey fig2 --out fig2.csv [--n-max 200] [--bins 4096]
    adkey verdict --scenario scenario.json

Exit codes: 0 on success, 2 on invalid input, 3 when a numeric guard refuses
the computation. Set ADKEY_LOG to error, info or debug for progress output.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import dataclasses
import importlib.resources
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from adkey import adqkd, discrimination, entropy, matcore
from adkey.classical_ht import DEFAULT_BINS
from adkey.errors import NumericGuardError, ValidationError
from adkey.matcore import DensityMatrix

log = logging.getLogger('adkey')

SCHEMA_VERSION = 1
MODES = ('conditional_states', 'tripartite', 'bell_diagonal')
CSV_COLUMNS = ('n', 'delta_n', 'h2_delta', 'bound_fidelity', 'bound_classical', 'bound_combined',
               'chernoff_finite_lower', 'upper_bound', 'key_rate_from_combined', 'ratio_Rn', 'verdict')
FIG1_COLUMNS = ('lambda', 'bound_fidelity', 'bound_errorprob', 'bound_integral', 'exact_entropy')
EPS_CROSSCHECK_TOL = 1e-9
ROW_TOL = 1e-9


def _fmt(x) -> str:
    # 17 significant digits round-trip any double.
    return '%.16e' % x


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    scenario_path: Path
    n_min: int = 1
    n_max: int = 10
    n_step: int = 1
    bins: int = DEFAULT_BINS
    quad_panels: int = entropy.DEFAULT_PANELS
    outputs: Path = Path('sweep.csv')
    with_upper: bool = True

    def __post_init__(self):
        if self.n_min < 1:
            raise ValidationError(f'n_min must be >= 1, got {self.n_min}')
        if self.n_max < self.n_min:
            raise ValidationError(f'n_max {self.n_max} < n_min {self.n_min}')
        if self.n_step < 1:
            raise ValidationError(f'n_step must be >= 1, got {self.n_step}')
        b = self.bins
        if b < 64 or b & (b - 1):
            raise ValidationError(f'bins must be a power of two >= 64, got {b}')
        if not 1 <= self.quad_panels <= entropy.MAX_PANELS:
            raise ValidationError(f'quad_panels must lie in [1, {entropy.MAX_PANELS}], got {self.quad_panels}')

    @property
    def ns(self) -> list:
        return list(range(self.n_min, self.n_max + 1, self.n_step))

    @classmethod
    def from_file(cls, path) -> 'SweepConfig':
        path = Path(path)
        raw = _read_json(path)
        _check_schema(raw, path)
        try:
            scen = Path(raw['scenario'])
        except KeyError:
            raise ValidationError(f'{path}: missing key "scenario"') from None
        if not scen.is_absolute():
            scen = path.parent / scen
        out = Path(raw.get('output', path.with_suffix('.csv').name))
        if not out.is_absolute():
            out = path.parent / out
        known = {'schema_version', 'scenario', 'output', 'n_min', 'n_max', 'n_step', 'bins',
                 'quad_panels', 'with_upper'}
        extra = set(raw) - known
        if extra:
            raise ValidationError(f'{path}: unknown keys {sorted(extra)}')
        kw = {k: raw[k] for k in ('n_min', 'n_max', 'n_step', 'bins', 'quad_panels', 'with_upper') if k in raw}
        for k, v in kw.items():
            if k != 'with_upper' and (not isinstance(v, int) or isinstance(v, bool)):
                raise ValidationError(f'{path}: "{k}" must be an integer, got {v!r}')
        return cls(scenario_path=scen, outputs=out, **kw)


def _read_json(path: Path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f'cannot read {path}: {exc.strerror}') from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        line = lines[exc.lineno - 1] if 0 < exc.lineno <= len(lines) else ''
        raise ValidationError(f'{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}\n    '
                              f'{" " * max(exc.colno - 1, 0)}^') from None


def _check_schema(raw, path):
    if not isinstance(raw, dict):
        raise ValidationError(f'{path}: top level must be a JSON object')
    v = raw.get('schema_version')
    if v != SCHEMA_VERSION:
        raise ValidationError(f'{path}: unsupported schema_version {v!r}, expected {SCHEMA_VERSION}')


def parse_matrix(obj, name: str) -> np.ndarray:
    """Nested list of [re, im] pairs (or plain reals) to a complex array."""
    try:
        a = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f'{name}: entries must be numbers or [re, im] pairs') from None
    if a.ndim == 3 and a.shape[-1] == 2:
        a = a[..., 0] + 1j * a[..., 1]
    elif a.ndim != 2:
        raise ValidationError(f'{name}: expected a square matrix of [re, im] pairs, got shape {a.shape}')
    if a.shape[0] != a.shape[1]:
        raise ValidationError(f'{name}: matrix is {a.shape[0]}x{a.shape[1]}, not square')
    if not np.all(np.isfinite(a)):
        raise ValidationError(f'{name}: non-finite entry')
    return a.astype(complex)


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _need(raw, key, path):
    if key not in raw:
        raise ValidationError(f'{path}: missing key "{key}"')
    return raw[key]


def _eps(raw, path):
    e = _need(raw, 'eps', path)
    if not isinstance(e, (int, float)) or isinstance(e, bool):
        raise ValidationError(f'{path}: "eps" must be a number')
    return float(e)


def scenario_from_dict(raw: dict, path='<scenario>') -> adqkd.Scenario:
    _check_schema(raw, path)
    mode = raw.get('mode', 'conditional_states')
    name = str(raw.get('name', Path(str(path)).stem))
    if mode == 'conditional_states':
        st = _need(raw, 'states', path)
        if not isinstance(st, dict):
            raise ValidationError(f'{path}: "states" must map 00, 01, 10, 11 to matrices')
        mats = [DensityMatrix(parse_matrix(_need(st, lab, f'{path}: states'), f'rho_ET|{lab}'),
                              name=f'rho_ET|{lab}') for lab in adqkd.LABELS]
        return adqkd.Scenario(_eps(raw, path), mats, name=name)
    if mode == 'tripartite':
        t = adqkd.TripartiteInput(
            DensityMatrix(parse_matrix(_need(raw, 'state', path), 'rho_ABE'), name='rho_ABE'),
            [parse_matrix(m, 'povm_a') for m in _need(raw, 'povm_a', path)],
            [parse_matrix(m, 'povm_b') for m in _need(raw, 'povm_b', path)])
        sc = adqkd.post_measurement_states(t)
    elif mode == 'bell_diagonal':
        ang = _need(raw, 'angles', path)
        try:
            angles = [float(ang[k]) for k in ('a0', 'a1', 'b0', 'b1')]
        except (KeyError, TypeError, ValueError):
            raise ValidationError(f'{path}: "angles" needs numeric a0, a1, b0, b1') from None
        sc = adqkd.post_measurement_states(
            adqkd.bell_diagonal_tripartite(_need(raw, 'lambdas', path), *angles))
    else:
        raise ValidationError(f'{path}: unknown mode {mode!r}, expected one of {MODES}')
    if 'eps' in raw:
        e = _eps(raw, path)
        if abs(e - sc.eps) > EPS_CROSSCHECK_TOL:
            raise ValidationError(f'{path}: eps = {e} disagrees with the measured statistics '
                                  f'(p(a != b) = {sc.eps:.12g})')
    return adqkd.Scenario(sc.eps, sc.cond_states, name=name)


def load_scenario(path) -> adqkd.Scenario:
    """Read and validate a scenario file (schema_version 1)."""
    return scenario_from_dict(_read_json(Path(path)), path)


def scenario_to_dict(sc: adqkd.Scenario) -> dict:
    return {'schema_version': SCHEMA_VERSION, 'mode': 'conditional_states', 'name': sc.name,
            'eps': sc.eps, 'states': {lab: matrix_to_json(sc.state(lab).entries) for lab in adqkd.LABELS}}


def shipped_scenario_path(name: str) -> Path:
    """Path of a scenario file bundled with the package, e.g. 'trivial_eve'."""
    p = importlib.resources.files('adkey') / 'data' / f'{name}.json'
    if not p.is_file():
        raise ValidationError(f'no shipped scenario named {name!r}')
    return Path(str(p))


def report_row(r: adqkd.BoundReport) -> list:
    return [str(r.n), _fmt(r.delta_n), _fmt(r.h2_delta), _fmt(r.bound_fidelity), _fmt(r.bound_classical),
            _fmt(r.bound_combined), _fmt(r.chernoff_finite_lower), _fmt(r.upper_bound), _fmt(r.key_rate),
            _fmt(r.ratio_Rn), r.verdict.value]


def _compute_rows(sc, ns, bins, panels, with_upper, threads):
    verdict = adqkd.asymptotic_verdict(sc)

    def one(n):
        try:
            rep = adqkd.block_entropy_bounds(sc, n, bins=bins, panels=panels, with_upper=with_upper,
                                             verdict=verdict)
        except (ValidationError, NumericGuardError) as exc:
            raise type(exc)(f'n = {n}: {exc}') from exc
        log.info('n = %d done: combined %.6e', n, rep.bound_combined)
        return rep

    if threads <= 1:
        return [one(n) for n in ns]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        # map keeps n-order regardless of completion order
        return list(pool.map(one, ns))


def write_csv(path, columns, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as fh:
        w = csv.writer(fh, lineterminator='\n')
        w.writerow(columns)
        w.writerows(rows)


def validate_sweep_csv(path) -> int:
    """Re-read a sweep CSV and check the report invariants row by row.

    Returns the number of rows. Raises NumericGuardError naming the first bad row.
    """
    with open(path, newline='') as fh:
        rd = csv.DictReader(fh)
        if tuple(rd.fieldnames or ()) != CSV_COLUMNS:
            raise NumericGuardError(f'{path}: unexpected header {rd.fieldnames}')
        count = 0
        for count, row in enumerate(rd, start=1):
            v = {k: float(row[k]) for k in CSV_COLUMNS[1:-1]}
            where = f'{path}: row {count} (n = {row["n"]})'
            lower = max(v['bound_fidelity'], v['chernoff_finite_lower'])
            if v['bound_combined'] < lower - ROW_TOL:
                raise NumericGuardError(f'{where}: bound_combined {v["bound_combined"]:.6e} below {lower:.6e}')
            if not math.isnan(v['upper_bound']) and v['upper_bound'] < v['bound_combined'] - 1e-6:
                raise NumericGuardError(f'{where}: upper_bound below bound_combined')
            if not 0.0 <= v['delta_n'] <= 0.5:
                raise NumericGuardError(f'{where}: delta_n outside [0, 1/2]')
            if row['verdict'] not in {x.value for x in adqkd.Verdict}:
                raise NumericGuardError(f'{where}: unknown verdict {row["verdict"]!r}')
    return count


def sweep_scenario(sc, out, ns, bins=DEFAULT_BINS, panels=entropy.DEFAULT_PANELS, with_upper=True,
                   threads=None) -> list:
    threads = threads or os.cpu_count() or 1
    reports = _compute_rows(sc, ns, bins, panels, with_upper, threads)
    write_csv(out, CSV_COLUMNS, [report_row(r) for r in reports])
    validate_sweep_csv(out)
    return reports


def run_sweep(cfg: SweepConfig, threads: int | None = None) -> Path:
    """Sweep the configured blocklengths and write one CSV row per n."""
    sc = load_scenario(cfg.scenario_path)
    sweep_scenario(sc, cfg.outputs, cfg.ns, cfg.bins, cfg.quad_panels, cfg.with_upper, threads)
    return cfg.outputs


def fig1_states(lam: float):
    """tau0 with Bloch vector (0, 0, 1), tau1 with (lam/sqrt2, 0, lam/sqrt2)."""
    r = lam / math.sqrt(2.0)
    return DensityMatrix.from_bloch([0.0, 0.0, 1.0]), DensityMatrix.from_bloch([r, 0.0, r])


def figure1_rows(grid=None):
    if grid is None:
        grid = np.round(np.arange(51) * 0.02, 10)
    rows = []
    for lam in grid:
        t0, t1 = fig1_states(float(lam))
        fid = matcore.fidelity(t0, t1)
        p_half = discrimination.helstrom_error(discrimination.BinaryEnsemble(0.5, t0, t1))
        b_fid = entropy.bound_fidelity_entropy(fid)
        b_err = entropy.bound_minentropy_entropy(p_half)
        b_int = entropy.bound_combined(fid, p_half)
        exact = entropy.exact_cond_entropy(entropy.CqState([0.5, 0.5], [t0, t1]))
        rows.append((float(lam), b_fid, b_err, b_int, exact))
    return rows


def figure1(out_path) -> Path:
    """Single-shot bounds for the qubit family tau0 = |0><0|, tau1 tilted by 45 degrees."""
    rows = figure1_rows()
    write_csv(out_path, FIG1_COLUMNS, [[_fmt(x) for x in r] for r in rows])
    return Path(out_path)


def figure2(out_path, n_max: int = 200, bins: int = DEFAULT_BINS, threads=None) -> Path:
    """Blocklength sweep of the shipped F = 0.684 scenario."""
    sc = load_scenario(shipped_scenario_path('fig2_f0684'))
    sweep_scenario(sc, out_path, list(range(1, n_max + 1)), bins, threads=threads)
    return Path(out_path)


def _verdict_text(sc, rec) -> str:
    lines = [
        f'scenario      {sc.name or "-"}',
        f'eps           {sc.eps:.12g}',
        f'beta_eps      {rec.beta_eps:.12g}',
        f'Q(00,11)      {rec.q:.12g}  (alpha* = {rec.alpha_star:.6f})',
        f'F(00,11)      {rec.fidelity:.12g}  (F^2 = {rec.fidelity ** 2:.12g})',
        f'F^2 > beta    {"yes" if rec.fidelity_condition else "no"}',
        f'pure states   {"yes" if rec.pure else "no"}',
        f'verdict       {rec.verdict.value}',
    ]
    return '\n'.join(lines)


def _setup_logging():
    level = os.environ.get('ADKEY_LOG', 'error').lower()
    levels = {'error': logging.ERROR, 'info': logging.INFO, 'debug': logging.DEBUG}
    if level not in levels:
        level = 'error'
    logging.basicConfig(level=levels[level], format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog='adkey', description='Entropy bounds for advantage-distillation QKD.')
    sub = p.add_subparsers(dest='command', required=True)
    s = sub.add_parser('sweep', help='blocklength sweep from a JSON config')
    s.add_argument('--config', required=True)
    s.add_argument('--threads', type=int, default=None)
    f1 = sub.add_parser('fig1', help='single-shot bound comparison on the qubit family')
    f1.add_argument('--out', required=True)
    f2 = sub.add_parser('fig2', help='bound_combined vs bound_fidelity on the shipped F = 0.684 scenario')
    f2.add_argument('--out', required=True)
    f2.add_argument('--n-max', type=int, default=200)
    f2.add_argument('--bins', type=int, default=DEFAULT_BINS)
    f2.add_argument('--threads', type=int, default=None)
    v = sub.add_parser('verdict', help='asymptotic key verdict for a scenario')
    v.add_argument('--scenario', required=True)
    return p


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        if args.command == 'sweep':
            out = run_sweep(SweepConfig.from_file(args.config), threads=args.threads)
            print(out)
        elif args.command == 'fig1':
            print(figure1(args.out))
        elif args.command == 'fig2':
            if args.n_max < 1:
                raise ValidationError(f'--n-max must be >= 1, got {args.n_max}')
            print(figure2(args.out, args.n_max, args.bins, args.threads))
        elif args.command == 'verdict':
            sc = load_scenario(args.scenario)
            print(_verdict_text(sc, adqkd.asymptotic_verdict(sc)))
    except NumericGuardError as exc:
        print(f'adkey: numeric guard: {exc}', file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f'adkey: invalid input: {exc}', file=sys.stderr)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())

"""Regenerate the scenario files shipped in src/adkey/data."""

import json
from pathlib import Path

import numpy as np

from adkey import adqkd, matcore
from adkey.cli import scenario_to_dict

DATA = Path(__file__).resolve().parent.parent / 'src' / 'adkey' / 'data'


def dump(sc, fname, **extra):
    d = scenario_to_dict(sc)
    d.update(extra)
    (DATA / fname).write_text(json.dumps(d, indent=1) + '\n')


def main():
    DATA.mkdir(exist_ok=True)
    mixed = np.eye(2) / 2
    dump(adqkd.Scenario(0.1, [mixed] * 4, name='trivial_eve'), 'trivial_eve.json')

    sc = adqkd.fig2_scenario()
    dump(adqkd.Scenario(sc.eps, sc.cond_states, name='fig2_f0684'), 'fig2_f0684.json')

    e0, e1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    plus = np.full((2, 2), 0.5)
    dump(adqkd.Scenario(0.1, [e0, plus, plus, e1], name='orthogonal_eve'), 'orthogonal_eve.json')

    rng = np.random.default_rng(7)
    st = [matcore.random_density_matrix(4, 4, rng) for _ in range(4)]
    dump(adqkd.Scenario(0.1, st, name='random_d4'), 'random_d4.json')

    bell = {'schema_version': 1, 'mode': 'bell_diagonal', 'name': 'bell_diagonal_z',
            'lambdas': [0.85, 0.05, 0.05, 0.05], 'angles': {'a0': 0.0, 'a1': np.pi / 2, 'b0': 0.0, 'b1': np.pi / 2}}
    (DATA / 'bell_diagonal_z.json').write_text(json.dumps(bell, indent=1) + '\n')


if __name__ == '__main__':
    main()

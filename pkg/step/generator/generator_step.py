#!/usr/bin/env python3
# See LICENSE for details

import copy
import logging
import os

from core.graph import Graph
from core.step import Step
from core.utils import dict_deep_merge, read_yaml
from tool.instance.instance_generator import InstanceParams, generate_random_instance
from tool.instance.instance_io import save_instance
from tool.roadnet.road_network import grid_road_network, load_road_network, urban_instance

logger = logging.getLogger(__name__)

DEFAULTS_FILE = os.path.join(os.path.dirname(__file__), 'defaults', 'instance_params.yaml')


def load_defaults() -> dict:
    defaults = read_yaml(DEFAULTS_FILE)
    if defaults is None:
        raise RuntimeError(f'cannot read generator defaults from {DEFAULTS_FILE}')
    return defaults


class Generator(Step):
    """
    Builds one repair instance and optionally saves it as an instance file.

    Reads from (all optional, merged over `defaults/instance_params.yaml`):
      - `mode`: random | urban
      - `seed`, `n`, `m`, `importance_range`, `travel_range_minutes`, `repair_table`, `zero_repair`
      - `urban`: `road_network` file, `speed_m_per_min`, `grid` (rows, cols, spacing_m, jitter)
      - `instance_file`: where to save the instance

    Writes:
      - `mode`, `seed`, `n`, `m`, `targets`, `total_importance`, `instance_file`
    """

    def __init__(self):
        super().__init__()
        self.graph: Graph | None = None

    def config(self, data: dict | None) -> dict:
        return dict_deep_merge(copy.deepcopy(load_defaults()), copy.deepcopy(data or {}))

    def generate(self, cfg: dict) -> Graph:
        params = InstanceParams.from_dict(cfg)
        mode = cfg.get('mode', 'random')
        if mode == 'random':
            return generate_random_instance(params)
        if mode == 'urban':
            urban = cfg.get('urban') or {}
            if urban.get('road_network'):
                network = load_road_network(urban['road_network'])
            else:
                network = grid_road_network(**(urban.get('grid') or {}), seed=params.seed)
            return urban_instance(network, params, float(urban.get('speed_m_per_min', 670.56)))
        raise ValueError(f"unknown generator mode {mode!r} (expected 'random' or 'urban')")

    def run(self, data):
        cfg = self.config(data)
        self.graph = self.generate(cfg)
        if cfg.get('instance_file'):
            save_instance(self.graph, cfg['instance_file'])
        return {
            'mode': cfg.get('mode', 'random'),
            'seed': int(cfg['seed']),
            'n': self.graph.n,
            'm': int(cfg['m']),
            'targets': len(self.graph.targets),
            'total_importance': float(self.graph.total_importance),
            'instance_file': cfg.get('instance_file'),
        }


if __name__ == '__main__':  # pragma: no cover
    raise SystemExit(Generator.main())

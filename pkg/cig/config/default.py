from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import os
import importlib.machinery
import importlib.util

from dotmap import DotMap

import cig

SUBCOMMANDS = ['spectrum', 'limits', 'fit-mixture', 'discretize', 'edgeworth', 'saddlepoint', 'embed-logistic']

DEFAULT_TOLERANCES = dict(
    prob_sum=1e-12,
    renormalize=1e-9,
    zero_threshold=0.0,
    group=1e-12,
    rank=1e-10,
    orthogonality=1e-10,
    polytope=1e-12,
    newton=1e-10,
    ill_conditioned=1e12,
    interior_margin=1e-9,
    quadrature=1e-10,
    dd=1e-6,
    prune=1e-8,
    eps=1e-3,
)


def section_name(subcommand):
    return subcommand.replace('-', '_') + '_cfg'


def available_presets():
    dir_path = os.path.dirname(os.path.realpath(__file__))
    return sorted(name[:-3] for name in os.listdir(dir_path)
                  if name.endswith('.py') and name not in ('__init__.py', 'default.py'))


def load_preset(preset):
    if preset not in available_presets():
        raise ValueError("Unknown preset '%s', choose from %s." % (preset, available_presets()))
    dir_path = os.path.dirname(os.path.realpath(__file__))
    loader = importlib.machinery.SourceFileLoader(
        preset, os.path.join(dir_path, "%s.py" % preset)
    )
    spec = importlib.util.spec_from_loader(loader.name, loader)
    cfg_source = importlib.util.module_from_spec(spec)
    loader.exec_module(cfg_source)
    return cfg_source.CONFIG_MODULE()


def create_config(subcommand, preset, overrides=(), tol_overrides=(), exp_args=None):
    """Builds the resolved configuration of one run.

    Arguments:
        subcommand (str): one of SUBCOMMANDS, or None for the preset's own default.
        preset (str): name of a module in this package exposing CONFIG_MODULE.
        overrides (list): (dotted key, string value) pairs.
        tol_overrides (list): (tolerance name, string value) pairs, i.e. tol_cfg.<name>.
        exp_args (DotMap): (optional) input, output, logdir and seed from the command line.
    """
    cfg = DotMap()
    type_map = DotMap(
        exp_cfg=DotMap(
            input=str,
            output=str,
            logdir=str,
            seed=int,
        ),
        tol_cfg=DotMap(**{name: float for name in DEFAULT_TOLERANCES}),
        spectrum_cfg=DotMap(
            pi=list,
            near_replicate_tol=float,
        ),
        limits_cfg=DotMap(
            base_point=list,
            cap=int,
        ),
        fit_mixture_cfg=DotMap(
            counts=list,
            n_trials=int,
            audit_factor=int,
            n_obs=int,
        ),
        discretize_cfg=DotMap(
            n_bins=int,
            width=float,
            theta=float,
            theta0=float,
            theta_grid=list,
            levels=int,
            labels=str,
            grid_size=int,
            n_obs=int,
        ),
        edgeworth_cfg=DotMap(
            lam_true=list,
            n_obs=int,
            order=int,
            z_min=float,
            z_max=float,
            z_size=int,
        ),
        saddlepoint_cfg=DotMap(
            lam_true=list,
            n_obs=int,
            renormalize=make_bool,
            n_rep=int,
            grid_size=int,
        ),
        embed_logistic_cfg=DotMap(
            cap=int,
        ),
    )

    cfg_module = load_preset(preset)
    subcommand = subcommand or getattr(cfg_module, 'SUBCOMMAND', None)
    if subcommand not in SUBCOMMANDS:
        raise ValueError("Unknown subcommand '%s', choose from %s." % (subcommand, SUBCOMMANDS))

    _create_exp_config(cfg.exp_cfg, cfg_module, subcommand, preset, exp_args)
    _create_tol_config(cfg.tol_cfg)
    _CREATORS[subcommand](cfg[section_name(subcommand)], cfg_module)

    for (k, v) in tol_overrides:
        apply_override(cfg, type_map, "tol_cfg.%s" % k, v)
    for (k, v) in overrides:
        apply_override(cfg, type_map, k, v)
    return cfg


def _create_exp_config(exp_cfg, cfg_module, subcommand, preset, exp_args):
    exp_args = DotMap() if exp_args is None else exp_args
    exp_cfg.subcommand = subcommand
    exp_cfg.preset = preset
    exp_cfg.version = cig.__version__
    exp_cfg.input = exp_args.get('input', None)
    exp_cfg.output = exp_args.get('output', None)
    exp_cfg.logdir = exp_args.get('logdir', 'log')
    seed = exp_args.get('seed', None)
    exp_cfg.seed = getattr(cfg_module, 'SEED', 0) if seed is None else seed


def _create_tol_config(tol_cfg):
    for name, value in DEFAULT_TOLERANCES.items():
        tol_cfg[name] = value


def _create_spectrum_config(sub_cfg, cfg_module):
    sub_cfg.pi = getattr(cfg_module, 'PI', None)
    sub_cfg.near_replicate_tol = getattr(cfg_module, 'NEAR_REPLICATE_TOL', 1e-2)


def _create_limits_config(sub_cfg, cfg_module):
    sub_cfg.base_point = getattr(cfg_module, 'BASE_POINT', None)
    sub_cfg.statistics = getattr(cfg_module, 'STATISTICS', None)
    sub_cfg.offsets = getattr(cfg_module, 'OFFSETS', None)
    sub_cfg.sigma = getattr(cfg_module, 'SIGMA', None)
    sub_cfg.counts = getattr(cfg_module, 'COUNTS', None)
    sub_cfg.pencil = getattr(cfg_module, 'PENCIL', None)
    sub_cfg.covariates = getattr(cfg_module, 'COVARIATES', None)
    sub_cfg.responses = getattr(cfg_module, 'RESPONSES', [])
    sub_cfg.cap = getattr(cfg_module, 'CAP', 4096)


def _create_fit_mixture_config(sub_cfg, cfg_module):
    sub_cfg.counts = getattr(cfg_module, 'COUNTS', None)
    sub_cfg.n_trials = getattr(cfg_module, 'N_TRIALS', None)
    sub_cfg.audit_factor = 10
    simulation = getattr(cfg_module, 'SIMULATION', None)
    if simulation is not None:
        sub_cfg.simulation = DotMap(support=simulation['support'], weights=simulation['weights'])
        sub_cfg.n_obs = simulation['n_obs']
    else:
        sub_cfg.n_obs = None


def _create_discretize_config(sub_cfg, cfg_module):
    sub_cfg.family = getattr(cfg_module, 'FAMILY', None)
    sub_cfg.family_params = DotMap(getattr(cfg_module, 'FAMILY_PARAMS', {}))
    sub_cfg.n_bins = getattr(cfg_module, 'N_BINS', None)
    sub_cfg.width = getattr(cfg_module, 'WIDTH', None)
    sub_cfg.theta = getattr(cfg_module, 'THETA', None)
    sub_cfg.theta0 = getattr(cfg_module, 'THETA0', None)
    sub_cfg.theta_grid = getattr(cfg_module, 'THETA_GRID', None)
    sub_cfg.grid_size = getattr(cfg_module, 'GRID_SIZE', 41)
    sub_cfg.data = getattr(cfg_module, 'DATA', None)
    sub_cfg.n_obs = getattr(cfg_module, 'N_OBS', 50)
    sub_cfg.levels = getattr(cfg_module, 'LEVELS', 4)
    sub_cfg.labels = getattr(cfg_module, 'LABELS', 'conditional')


def _create_edgeworth_config(sub_cfg, cfg_module):
    sub_cfg.base_point = getattr(cfg_module, 'BASE_POINT', None)
    sub_cfg.statistics = getattr(cfg_module, 'STATISTICS', None)
    sub_cfg.lam_true = getattr(cfg_module, 'LAM_TRUE', None)
    sub_cfg.n_obs = getattr(cfg_module, 'N_OBS', 20)
    sub_cfg.order = 1
    sub_cfg.z_min, sub_cfg.z_max, sub_cfg.z_size = -4.0, 4.0, 161


def _create_saddlepoint_config(sub_cfg, cfg_module):
    sub_cfg.base_point = getattr(cfg_module, 'BASE_POINT', None)
    sub_cfg.statistics = getattr(cfg_module, 'STATISTICS', None)
    sub_cfg.lam_true = getattr(cfg_module, 'LAM_TRUE', None)
    sub_cfg.n_obs = getattr(cfg_module, 'N_OBS', 10)
    sub_cfg.renormalize = False
    sub_cfg.family = getattr(cfg_module, 'FAMILY', None)
    sub_cfg.family_params = DotMap(getattr(cfg_module, 'FAMILY_PARAMS', {}))
    sub_cfg.width = getattr(cfg_module, 'WIDTH', None)
    sub_cfg.data = getattr(cfg_module, 'DATA', None)
    sub_cfg.n_rep = getattr(cfg_module, 'N_REP', 2000)
    sub_cfg.grid_size = 81


def _create_embed_logistic_config(sub_cfg, cfg_module):
    sub_cfg.covariates = getattr(cfg_module, 'COVARIATES', None)
    sub_cfg.responses = getattr(cfg_module, 'RESPONSES', [])
    sub_cfg.cap = 20


_CREATORS = {
    'spectrum': _create_spectrum_config,
    'limits': _create_limits_config,
    'fit-mixture': _create_fit_mixture_config,
    'discretize': _create_discretize_config,
    'edgeworth': _create_edgeworth_config,
    'saddlepoint': _create_saddlepoint_config,
    'embed-logistic': _create_embed_logistic_config,
}


def apply_override(cfg, type_map, override_key, value, prefix=''):
    """Modifies the configuration to apply the given override.
    """
    pth = override_key.split(".")
    filter_pth = prefix.split(".")
    # lists of numbers
    if value.startswith('[') and value.endswith(']'):
        value = value.replace('[', '')
        value = value.replace(']', '')
        value = value.split(',')
        value = [float(val) for val in value if val != '']
    if len(prefix) == 0 or pth[:len(filter_pth)] == prefix.split("."):
        cur_map = cfg
        cur_type_map = type_map
        try:
            for key in pth[:-1]:
                cur_map = cur_map[key]
                cur_type_map = cur_type_map[key]
        except KeyError:
            raise KeyError(
                "Either %s cannot be overridden (is data/a function/etc.) or "
                "the type map is not updated." % override_key
            )
        if not isinstance(cur_type_map, DotMap) or cur_type_map.get(pth[-1], None) is None \
                or pth[-1] not in cur_map:
            raise KeyError(
                "Either %s cannot be overridden (is data/a function/etc.) or "
                "the type map is not updated." % override_key
            )
        try:
            cur_map[pth[-1]] = cur_type_map[pth[-1]](value)
        except (TypeError, ValueError):
            raise ValueError("Cannot cast %s to the type of %s." % (value, override_key))


def make_bool(arg):
    if arg == "False" or arg == "false" or not bool(arg):
        return False
    else:
        return True

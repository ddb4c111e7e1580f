from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import os
import sys
import argparse
import pprint

from dotmap import DotMap

from cig.misc.CIGExp import CIGExperiment
from cig.config import create_config
from cig.config.default import SUBCOMMANDS, available_presets
from cig.misc import logger


def main(subcommand, preset, overrides, tol_overrides, exp_args):
    cfg = create_config(subcommand, preset, overrides, tol_overrides, exp_args)
    logger.info('\n' + pprint.pformat(cfg.toDict()))

    exp = CIGExperiment(cfg)
    with open(os.path.join(exp.logdir, "config.txt"), "w") as f:
        f.write(pprint.pformat(cfg.toDict()))

    return exp.run_experiment()


def build_parser():
    parser = argparse.ArgumentParser(
        description='Computational information geometry on the extended multinomial simplex.'
    )
    parser.add_argument('subcommand', nargs='?', default=None, choices=SUBCOMMANDS,
                        help="What to compute (default: the preset's own subcommand)")
    parser.add_argument('-preset', '--preset', type=str, required=True,
                        help='Preset name: select from %s' % available_presets())
    parser.add_argument('-input', '--input', type=str, default=None,
                        help='Input file: counts or observations CSV, or a JSON object of parameters')
    parser.add_argument('-output', '--output', type=str, default=None,
                        help='Path of the JSON result (default: <logdir>/<date+time>/result.json)')
    parser.add_argument('-logdir', '--logdir', type=str, default='log',
                        help='Directory to which runs will be logged (default: ./log)')
    parser.add_argument('-seed', '--seed', type=int, default=None,
                        help='Seed for any Monte Carlo (default: the preset seed, else 0)')
    parser.add_argument('-tol', '--tol', action='append', nargs=2, default=[],
                        help='Override a tolerance, e.g. -tol dd 1e-8')
    parser.add_argument('-o', '--override', action='append', nargs=2, default=[],
                        help='Override a parameter, e.g. -o discretize_cfg.n_bins 40')
    return parser


if __name__ == "__main__":
    args = build_parser().parse_args()
    exp_args = DotMap(input=args.input, output=args.output, logdir=args.logdir, seed=args.seed)
    try:
        main(args.subcommand, args.preset, args.override, args.tol, exp_args)
    except (ValueError, RuntimeError, KeyError) as e:
        logger.error(str(e))
        sys.exit(2)

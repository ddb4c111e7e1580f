from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import os
from time import localtime, strftime

import cig
from cig.controllers import CONTROLLERS
from cig.config.default import section_name
from cig.misc import logger
from cig.misc.DotmapUtils import get_required_argument, to_plain
from cig.misc.io_util import write_json, write_table


class CIGExperiment:

    def __init__(self, cfg):
        """Initializes class instance.

        Argument:
            cfg (DotMap): The resolved configuration from create_config, containing:
                .exp_cfg:
                    .subcommand (str): Which controller to run.
                    .output (str): (optional) Path of the JSON result. Defaults to
                        <logdir>/result.json.
                    .logdir (str): Parent of directory path where the run is logged.
                        The run is logged in logdir/<date+time of run start>.
                .tol_cfg: The tolerances.
                .<subcommand>_cfg: The subcommand section.
        """
        self._cfg = cfg
        exp_cfg = cfg.exp_cfg
        self.subcommand = get_required_argument(exp_cfg, "subcommand", "Must provide a subcommand.")
        self.logdir = os.path.join(
            get_required_argument(exp_cfg, "logdir", "Must provide log parent directory."),
            strftime("%Y-%m-%d--%H:%M:%S", localtime())
        )
        logger.set_file_handler(path=self.logdir)
        self.output = exp_cfg.get('output', None) or os.path.join(self.logdir, 'result.json')
        self.controller = CONTROLLERS[self.subcommand](
            cfg[section_name(self.subcommand)], cfg.tol_cfg, exp_cfg
        )

    def run_experiment(self):
        """Runs the controller and writes the JSON result next to one CSV per table.
        """
        logger.info("Running '%s' (preset %s)." % (self.subcommand, self._cfg.exp_cfg.preset))
        result = self.controller.run()

        stem = os.path.splitext(self.output)[0]
        table_paths = {}
        for name, table in sorted(result.tables.items()):
            path = "%s_%s.csv" % (stem, name)
            write_table(path, table)
            table_paths[name] = os.path.basename(path)

        payload = dict(
            subcommand=self.subcommand,
            result=result.summary,
            tables=table_paths,
            provenance=dict(version=cig.__version__, config=to_plain(self._cfg)),
        )
        write_json(self.output, payload)
        logger.info("Wrote %s" % self.output)
        return payload

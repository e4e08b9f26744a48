# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

from traitlets.config import Application

from ._version import __version__
from .expChsh import RunChshApp
from .expCluster import RunClusterScalingApp
from .expConfig import ListTopologiesApp, ValidateConfigApp
from .expProtocol import RunProtocolApp
from .expSweep import RunSweepApp
from .expTomography import RunTomographyApp

__all__ = ["MqncApp", "main"]

_subcommandDict = dict(
    (
        ("run-protocol", RunProtocolApp),
        ("run-sweep", RunSweepApp),
        ("run-tomography", RunTomographyApp),
        ("run-chsh", RunChshApp),
        ("run-cluster-scaling", RunClusterScalingApp),
        ("validate-config", ValidateConfigApp),
        ("list-topologies", ListTopologiesApp),
    )
)


class MqncApp(Application):
    name = "mqncsim"
    version = __version__
    description = "Simulate entanglement swapping, linear-cluster MBQC and butterfly network coding under depolarizing noise."

    subcommands = dict((name, (app, app.description)) for name, app in _subcommandDict.items())

    def start(self):
        if self.subapp is None:
            self.print_subcommands()
            self.exit(1)
        return self.subapp.start()


def main(argv=None):
    MqncApp.launch_instance(argv=argv)

# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

import simplejson

from .baseManager import QnetBaseApp, QnetBaseManager
from .exception import EmbeddingError
from .protocols import find_embedding, validate_embedding
from .topology import PRESETS
from .util import jsonize

__all__ = ["ConfigManager", "ListTopologiesApp", "ValidateConfigApp"]


## manager
class ConfigManager(QnetBaseManager):
    """Validates a configuration, including the protocol embedding, without running it"""

    kind = "validate-config"

    def _run(self):
        record = self.newRecord()
        p = self.protocol(enforce=False)
        topology = self.topology()
        report = validate_embedding(topology, p)
        if not report.ok:
            raise EmbeddingError(
                "embedding violates the device coupling map.",
                report=report,
                topology=topology.name,
                violations=report.violations,
                embeddable=find_embedding(topology, p) is not None,
            )
        record.details["embedding"] = report
        record.details["census"] = p.circuit.census()
        return record


## application
class ValidateConfigApp(QnetBaseApp):
    name = "mqncsim validate-config"
    description = "Validate a configuration and print it in normalized form."
    managerClass = ConfigManager

    def start(self):
        record = super().start()
        print(simplejson.dumps(jsonize(record.config), sort_keys=True, indent=2))
        return record


class ListTopologiesApp(QnetBaseApp):
    name = "mqncsim list-topologies"
    description = "List the shipped topology presets."

    def start(self):
        summary = [PRESETS[name].summary() for name in sorted(PRESETS)]
        print(simplejson.dumps(summary, sort_keys=True, indent=2))
        return summary

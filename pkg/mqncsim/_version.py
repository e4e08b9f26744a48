# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

__version__ = '0.1.0'

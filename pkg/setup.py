""" mqncsim : entanglement-distribution protocol simulator

Copyright (c) mqncsim Development Team.
Distributed under the terms of the Modified BSD License.
"""

import os
import sys

import setuptools

HERE = os.path.abspath(os.path.dirname(__file__))


def get_version(fpath):
    """Get the version of the package from the given file by executing it"""
    scope = {}
    with open(os.path.join(HERE, fpath)) as f:
        exec(f.read(), scope)
    return scope["__version__"]


with open("README.md", "r") as fh:
    long_description = fh.read()

setup_dict = dict(
    name="mqncsim",
    description="Simulator for entanglement swapping, linear-cluster MBQC and measurement-based network coding under depolarizing noise.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(),
    license="BSD",
    platforms="Linux, Mac OS X, Windows",
    keywords=["quantum network", "MBQC", "graph state", "CHSH", "tomography"],
    python_requires=">=3.8",
    classifiers=[
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    install_requires=[
        "h5py",
        "networkx",
        "numpy",
        "scipy>=1.12",
        "simplejson",
        "traitlets>=5",
    ],
    extras_require={
        "dev": [
            "black",
            "pytest",
        ]
    },
    entry_points={
        "console_scripts": [
            "mqncsim = mqncsim.app:main",
        ]
    },
)

if sys.version_info < (3, 8):
    raise ValueError("to use {} you must use python {} ".format(setup_dict["name"], setup_dict["python_requires"]))

setuptools.setup(version=get_version("mqncsim/_version.py"), **setup_dict)

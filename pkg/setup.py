#!/usr/bin/env python
# -*- encoding: utf-8 -*-
"""gropetower setup script"""
import sys
from setuptools import setup, find_packages

# Give setuptools a hint to complain if it's too old a version
# 30.3.0 allows us to put most metadata in setup.cfg
# Should match pyproject.toml
SETUP_REQUIRES = ['setuptools >= 40.8']
# This enables setuptools to install wheel on-the-fly
SETUP_REQUIRES += ['wheel'] if 'bdist_wheel' in sys.argv else []


if __name__ == '__main__':

    setup(name='gropetower',
          setup_requires=SETUP_REQUIRES,
          packages=find_packages("src"),
          package_dir={"": "src"},
          )

# -*- coding: utf-8 -*-

from setuptools import setup


with open('README.rst', 'r') as f:
    readme = f.read()

with open('requirements.txt', 'r') as f:
    reqs = [r for r in f.read().split('\n') if r]

setup(name='chi2path',
      version='1.0.0',  # also change version in version.py
      description='python package for second-order nonlinear optics in dressed dielectric media',
      long_description=readme,
      author='chi2path developers',
      license='BSD-3',
      keywords="nonlinear optics chi2 SPDC squeezing Green function Feynman diagrams dielectric",
      packages=['chi2path'],
      package_data={'chi2path': ['data/*.json']},
      scripts=['bin/example_chi2path.py'],
      entry_points={'console_scripts': ['chi2path = chi2path.cli:main']},
      classifiers=[
          'Development Status :: 4 - Beta',
          'Intended Audience :: Science/Research',
          'Topic :: Scientific/Engineering :: Physics',
          'License :: OSI Approved :: BSD License',
          'Programming Language :: Python :: 3',
          'Programming Language :: Python :: 3.8'],
      install_requires=reqs
      )

# -*- coding: utf-8 -*-

import setuptools


VERSION = "0.1.0"


with open("README.md", "r") as fh:
    long_description = fh.read()


setuptools.setup(
    name="spectra_count",
    version=VERSION,
    keywords=[
        "eigenvalues",
        "inertia",
        "krylov",
        "lanczos",
        "preconditioning",
        "sparse",
        "trace-estimation",
    ],
    description="Stochastic estimation of eigenvalue counts of large sparse symmetric matrices",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    package_data={"spectra_count": ["defaults.yml"]},
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.12",
        "pyyaml>=5.3",
    ],
    entry_points={
        'console_scripts': [
            'spectra-count = spectra_count.cli:run',
        ],
    },
    python_requires=">=3.8",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3 :: Only",
        "Operating System :: OS Independent",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)

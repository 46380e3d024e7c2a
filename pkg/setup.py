from setuptools import setup, find_packages

PYTHON_REQUIRES = ">=3.8"

INSTALL_REQUIRES = [
    "click",
    "dask",
    "numpy",
    "pandas",
    "sympy",
]

EXTRAS_REQUIRE = {
    "distributed": ["distributed"],
    "tests": ["pytest", "hypothesis"],
}

setup(name='modsupp',
      version='0.1',
      python_requires=PYTHON_REQUIRES,
      install_requires=INSTALL_REQUIRES,
      extras_require=EXTRAS_REQUIRE,
      include_package_data=True,
      packages=find_packages(exclude=['tests']),
      package_data={'modsupp.core': ['fixtures/*.json']},
      entry_points={'console_scripts': ['modsupp=modsupp.cli:main']},
      )

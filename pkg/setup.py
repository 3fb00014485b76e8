from setuptools import setup, find_packages

__version__ = '0.1.0'
__pkg_name__ = 'preserver_lab'

setup(
    name = 'preserver-lab',
    version = __version__,
    description = 'Classification of linear operators preserving hyperbolic, stable and circular-domain polynomials',
    packages = find_packages(),
    license = 'MIT',
    entry_points = {
        'console_scripts': ['preserver-lab = preserver_lab.cli:main'],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.6',
        'Topic :: Scientific/Engineering :: Mathematics'
    ],
    install_requires = [
        "numpy",
        "scipy",
        "ujson",
        "tqdm",
        "sympy",
        "mpmath"
    ],
    tests_require = [
        "pytest",
        "hypothesis"
    ],
    extras_require = {
        'test': ["pytest", "hypothesis"]
    },
    test_suite = __pkg_name__ + '.test'
)

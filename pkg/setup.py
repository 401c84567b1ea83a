from setuptools import setup

setup(
    name='geograph',
    version='1.0',
    packages=['geograph', 'references'],
    package_data={'references': ['*.json']},
    url='',
    license='MIT',
    description='Geodesic graphs and natural reductivity of homogeneous Finsler metrics',
    install_requires=[
        'numpy<2',
        'scipy',
        'sympy>=1.12',
        'pandas<2',
        'verboselogs',
        'jsonschema',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    entry_points={
        'console_scripts': ['geograph=geograph.cli:main'],
    },
)

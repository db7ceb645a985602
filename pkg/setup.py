# Basic setup.py structure from:
# http://stackoverflow.com/questions/16981921/relative-imports-in-python-3

from setuptools import setup, find_packages

setup(name='rerp', packages=find_packages(exclude=['examples', 'examples.*']),
        install_requires=[
            'numpy',
            'scipy',
            'pandas',
            'pyyaml'
        ],
        entry_points={
            'console_scripts': ['rerp=rerp.cli.rerp_main:_main']
        }
     )

from setuptools import setup, find_packages

setup(
    name="qwzeta",
    version="0.1",
    packages=find_packages(exclude=["tests"]),
    install_requires=[
        "numpy",
        "scipy",
        "networkx",
        "sympy",
        "python-dotenv",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": ["qwzeta=src.cli:main"],
    },
)

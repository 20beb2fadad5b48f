from setuptools import setup, find_packages
import sys

CURRENT_PYTHON = sys.version_info[:2]
REQUIRED_PYTHON = (3, 12)

if CURRENT_PYTHON < REQUIRED_PYTHON:
    sys.stderr.write(
        """
==============================
Versão do Python não suportada
==============================

Esta versão do Kloverify requer o Python {}.{}, mas você está tentando
instalar na versão {}.{}.

""".format(
            *(REQUIRED_PYTHON + CURRENT_PYTHON)
        )
    )
    sys.exit(1)


def read(f):
    with open(f, "r", encoding="utf-8") as file:
        return file.read()


setup(
    name="kloverify",
    version="0.1",
    description="Verificação exata de momentos de somas de Kloosterman via supercaracteres.",
    long_description=read("README.md"),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=("tests", "tests.*", "examples", "examples.*")),
    include_package_data=True,
    install_requires=[
        "numpy>=1.26",
        "sympy>=1.12",
        "pytz>=2024.2",
        "marshmallow>=3.26.0",
    ],
    extras_require={"test": ["pytest>=8.0"]},
    entry_points={"console_scripts": ["kloverify=kloverify.cli:run"]},
    python_requires=">=3.12",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)

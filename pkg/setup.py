from setuptools import setup

setup(
    name="twistkrein",
    version="0.1.0",
    description="Finite spectral triples, minimal twists and Krein products",
    packages=["src", "src.services", "src.routes"],
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.26",
        "scipy>=1.11",
        "pydantic>=2.6",
        "typer>=0.12",
        "python-dotenv>=1.0",
    ],
    extras_require={"test": ["pytest>=8", "hypothesis>=6.99"]},
    entry_points={"console_scripts": ["twistkrein=src.app:main"]},
)

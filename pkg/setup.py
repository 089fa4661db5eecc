from setuptools import setup, find_packages

with open("requirements.txt", encoding="utf-8") as f:
    required = [line for line in f.read().splitlines() if line and not line.startswith("#")]

setup(
    name="interfem",
    version="0.1.0",
    description="Finite element solver for elliptic transmission problems with conormal flux jumps.",
    long_description=open("README.md", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(include=["interfem", "interfem.*"]),
    install_requires=required,
    include_package_data=True,
    package_data={"interfem": ["examples/*.ini"]},
    python_requires=">=3.10",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    entry_points={
        "console_scripts": [
            "interfem=interfem.cli:main",
        ]
    },
    extras_require={
        "dev": [
            "pytest",
            "black",
            "flake8",
            "isort",
            "build",
        ]
    },
    license="MIT",
)

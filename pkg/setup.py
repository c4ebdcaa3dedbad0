from setuptools import setup

setup(
    name='drawpath',
    version='0.1.0',
    author='Jacob Schreiber',
    author_email='jmschreiber91@gmail.com',
    packages=['drawpath'],
    scripts=['bin/drawpath'],
    description='Pen drawing paths from line art, ordered with a random-key genetic algorithm',
    install_requires=[
        "numpy >= 1.17.0",
        "scipy >= 1.0.0",
        "pandas >= 1.3.3",
        "tqdm >= 4.64.1",
        "numba >= 0.55.1",
        "matplotlib >= 3.3.0",
        "seaborn >= 0.11.2",
        "Pillow >= 9.1.0",
        "svgwrite >= 1.4",
        "scikit-image >= 0.19.0"
    ],
    extras_require={
        "test": ["pytest >= 7.0"]
    },
)

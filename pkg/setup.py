from setuptools import setup, find_packages

setup(
    name='kontsevich_check',
    version='0.1',
    packages=find_packages('src'),
    package_dir={'': 'src'},
    install_requires=['numpy', 'sympy', 'graphviz'],
    entry_points={'console_scripts': [
        'kontsevich-check = kontsevich_check.main:main',
    ]})

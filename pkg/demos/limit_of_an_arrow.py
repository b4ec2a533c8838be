"""The lax limit of a single arrow and its universal property.

Checks the shipped gamma1 development and prints every elaborated
declaration, then shows the invertible 2-cells the rules produce.

    python demos/limit_of_an_arrow.py
"""

from importlib.resources import files

from cattlim.cli import run
from cattlim.printer import show
from cattlim.surface import parse


def main():
    text = files("cattlim").joinpath("corpus/gamma1.catt").read_text()
    report = run(parse(text))
    print(report.render(elaborated=True, timings=False))
    env = report.session.env
    for name in ("u_sx", "i_sx", "e_sx", "c_sx"):
        e = env[name]
        print(f"{name:5} = {show(e.value)}\n        : {show(e.extra['type'])}")
    return report


if __name__ == "__main__":
    main()

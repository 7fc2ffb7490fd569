'''Helpers shared by the examples: pausing between steps and printing curves.
'''

from src import selfsim


def pause():
    '''Wait for the <ENTER> key before moving to the next step.
    '''
    _ = input('Press the <ENTER> key to continue...')
    print()


def tab(lines: str) -> str:
    '''Indent every line of a block of text by one level.

    #### Arguments
        lines (str): Text to indent.

    #### Return
        str: Indented text.
    '''
    return '\n'.join('    ' + line for line in lines.splitlines(False))


def show_curve(curve: 'selfsim.ensemble.CorrelatorCurve', reference=None) -> str:
    '''Format a curve as one line per point, optionally next to a reference curve.

    #### Arguments
        curve (CorrelatorCurve): Curve to format.
        reference (CorrelatorCurve): Curve with the same indices, printed in a second column. \
            Defaults to `None`.

    #### Return
        str: Formatted table.
    '''
    lines = []
    others = reference.points if reference is not None else [None] * len(curve.points)
    for (point, other) in zip(curve.points, others):
        line = f'{str(point.index):>10}  {point.value:12.5g}'
        if point.err is not None:
            line += f' +- {point.err:.2g}'
        if other is not None:
            line += f'   (model {other.value:.5g})'
        lines.append(line)
    return '\n'.join(lines)


if __name__ == '__main__':
    print('This module only exports helpers for the other examples.')

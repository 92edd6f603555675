import os

import pytest

from spbw.presentation import load_preset

debug_level = os.environ.get('SPBW_DEBUG')
if debug_level:
    import logging

    logging.basicConfig(
        style='{',
        format='[{asctime}.{msecs:03.0f}] {levelname}:{name}: {message}',
        datefmt='%H:%M:%S',
    )
    logging.getLogger('spbw').setLevel(int(debug_level))


@pytest.fixture(scope='session')
def f4z2():
    return load_preset('f4z2')


@pytest.fixture(scope='session')
def f4z2_ext():
    return load_preset('f4z2-ext')


@pytest.fixture(scope='session')
def s2z4():
    return load_preset('s2z4')


@pytest.fixture(scope='session')
def mat_kt2():
    return load_preset('mat-kt2')


@pytest.fixture(scope='session')
def qplane5():
    return load_preset('qplane5')

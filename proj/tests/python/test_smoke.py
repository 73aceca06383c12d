import _jetlift


def test_module_imports():
    assert _jetlift.__doc__

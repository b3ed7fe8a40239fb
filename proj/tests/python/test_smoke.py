def test_import():
    import _opforms

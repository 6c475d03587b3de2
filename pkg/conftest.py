# Puts the repository root on sys.path so test modules can import tests.base_test_case

import doctest

import pytest

from mzfisher import optimize, states


@pytest.mark.parametrize("module", [states, optimize])
def test_docstring_examples(module):
    result = doctest.testmod(module)
    assert result.failed == 0

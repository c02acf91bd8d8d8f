"""Tests for CSV output validation."""

import pytest

from clapp_chaos.validators.output_validator import OutputValidator, ValidationResult


@pytest.fixture
def validator():
    return OutputValidator()


def write(tmp_path, text, name="out.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_valid_numeric_file(validator, tmp_path):
    result = validator.validate_csv(write(tmp_path, "index,real,imag\n0,1.5,-2\n1,3e9,0\n"))
    assert result.is_valid
    assert result.row_count == 2
    assert result.columns == ["index", "real", "imag"]


def test_label_columns_skip_numeric_check(validator, tmp_path):
    path = write(tmp_path, "r_e,max_real_part,classification\n1,-5,stable\n")
    assert not validator.validate_csv(path).is_valid
    assert validator.validate_csv(path, label_columns=["classification"]).is_valid


def test_column_count_mismatch(validator, tmp_path):
    result = validator.validate_csv(write(tmp_path, "t,v_c1\n0,1\n1,2,3\n"))
    assert not result.is_valid
    assert "line 3" in result.errors[0]


@pytest.mark.parametrize("cell", ["nan", "inf", "-inf", "abc"])
def test_non_finite_or_text_rejected(validator, tmp_path, cell):
    result = validator.validate_csv(write(tmp_path, f"x,y\n0,{cell}\n"))
    assert not result.is_valid


def test_missing_values(validator, tmp_path):
    path = write(tmp_path, "beta,mismatch\n10,\n20,0.5\n")
    assert not validator.validate_csv(path).is_valid
    result = validator.validate_csv(path, allow_missing=True)
    assert result.is_valid
    assert result.missing_counts["mismatch"] == 1
    assert result.warnings


def test_expected_header(validator, tmp_path):
    path = write(tmp_path, "a,b\n1,2\n")
    assert not validator.validate_csv(path, expected_columns=["a", "c"]).is_valid


def test_empty_and_missing_files(validator, tmp_path):
    assert not validator.validate_csv(write(tmp_path, "")).is_valid
    assert not validator.validate_csv(str(tmp_path / "absent.csv")).is_valid


def test_error_cap(tmp_path):
    rows = "".join(f"{i},x\n" for i in range(50))
    result = OutputValidator(max_errors=5).validate_csv(write(tmp_path, "a,b\n" + rows))
    assert len(result.errors) == 5
    assert result.row_count == 50


def test_summary_and_dict():
    result = ValidationResult(path="eigs.csv", columns=["index"])
    result.add_error("line 2: bad")
    assert "FAILED" in result.summary()
    assert result.to_dict()["errors"] == ["line 2: bad"]

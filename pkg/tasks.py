"""Tasks for use with Invoke."""
import sys

from invoke import task

try:
    import toml
except ImportError:
    sys.exit("Please make sure to `pip install toml` or enable the Poetry shell and run `poetry install`.")


PYPROJECT_CONFIG = toml.load("pyproject.toml")
# Get project name from the toml file
PROJECT_NAME = PYPROJECT_CONFIG["tool"]["poetry"]["name"]


def run_cmd(context, exec_cmd):
    """Wrapper to run the invoke task commands.

    Args:
        context ([invoke.task]): Invoke task object.
        exec_cmd ([str]): Command to run.

    Returns:
        result (obj): Contains Invoke result from running task.
    """
    print(f"Running command {exec_cmd}")
    return context.run(exec_cmd, pty=True)


@task
def coverage(context):
    """Run the coverage report against pytest.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"coverage run --source={PROJECT_NAME} -m pytest")
    run_cmd(context, "coverage report")
    run_cmd(context, "coverage html")


@task
def pytest(context):
    """Run the doctests and the unit tests with a coverage report.

    Args:
        context (obj): Used to run specific commands
    """
    exec_cmd = (
        f"pytest -vv --doctest-modules {PROJECT_NAME}/ && coverage run --source={PROJECT_NAME} -m pytest"
        " && coverage report"
    )
    run_cmd(context, exec_cmd)


@task
def black(context):
    """Run black to check that Python files adherence to black standards.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, "black --check --diff .")


@task
def flake8(context):
    """Run flake8 over the package and tests.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"flake8 --max-line-length 120 --exclude examples {PROJECT_NAME} tests tasks.py")


@task
def pylint(context):
    """Run pylint over the package and tests.

    Args:
        context (obj): Used to run specific commands
    """
    exec_cmd = 'find . -name "*.py" | grep -vE "(tests/unit/mock|examples)" | xargs pylint'
    run_cmd(context, exec_cmd)


@task
def yamllint(context):
    """Run yamllint over the YAML files of the repository.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, "yamllint mkdocs.yml")


@task
def pydocstyle(context):
    """Run pydocstyle to validate docstring formatting.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"pydocstyle {PROJECT_NAME}")


@task
def bandit(context):
    """Run bandit to validate basic static code security analysis.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"bandit --recursive {PROJECT_NAME}")


@task
def mypy(context):
    """Run mypy to validate typing-hints.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"mypy ./{PROJECT_NAME}")


@task
def tests(context):
    """Run all linters and tests.

    Args:
        context (obj): Used to run specific commands
    """
    black(context)
    flake8(context)
    pylint(context)
    yamllint(context)
    pydocstyle(context)
    bandit(context)
    mypy(context)
    pytest(context)

    print("All tests have passed!")


@task
def docs(context):
    """Build and serve docs locally for development."""
    run_cmd(context, "mkdocs serve -v --dev-addr=127.0.0.1:8001")


@task
def bench(context, axis="n", values="", csv="bench.csv"):
    """Append a benchmark sweep over one axis to a CSV file.

    Args:
        context (obj): Used to run specific commands
        axis (str): One of n, buffer, block, range or diam
        values (str): Comma separated axis values, the preset grid of the axis when empty
        csv (str): CSV file receiving the rows
    """
    grid = f" --values {values}" if values else ""
    run_cmd(context, f"{PROJECT_NAME} -v bench --axis {axis}{grid} --csv {csv}")

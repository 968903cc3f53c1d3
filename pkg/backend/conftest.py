import logging
from pathlib import Path

import pytest
from typer.testing import CliRunner

from tokenization.service.rule_morph_service import enumerate_derivations, load_rules
from utils.config import BUNDLED_RULES, get_settings
from utils.rng import XorShift64Star


@pytest.fixture(autouse=True)
def isolated_settings_and_logging():
    """Each test sees fresh settings, and CLI runs cannot leave handlers on closed streams behind."""
    get_settings.cache_clear()
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    get_settings.cache_clear()
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture(scope="session")
def toy_rules():
    return load_rules(BUNDLED_RULES)


def synthetic_parallel_lines(n: int, seed: int = 7) -> tuple[list[str], list[str]]:
    """Yup'ik-like sentences built from the bundled grammar, with gloss sentences as the English side."""
    rules = load_rules(BUNDLED_RULES)
    derivations = enumerate_derivations(rules, depth=2)
    rng = XorShift64Star(seed)
    sources, targets = [], []
    for _ in range(n):
        words = [derivations[rng.below(len(derivations))] for _ in range(2 + rng.below(4))]
        sources.append(" ".join(surface for _, _, surface in words) + " .")
        glosses = []
        for base, suffixes, _ in words:
            glosses.append(rules.bases[base].replace(".", " "))
            glosses += [s.gloss.lower().replace(".", " ") for s in suffixes]
        targets.append(" ".join(glosses).capitalize() + ".")
    return sources, targets


@pytest.fixture
def parallel_files(tmp_path: Path):
    """Factory writing an n-line synthetic parallel corpus; returns (source_path, target_path)."""
    def write(n: int = 100, seed: int = 7) -> tuple[Path, Path]:
        sources, targets = synthetic_parallel_lines(n, seed)
        source_path = tmp_path / f"corpus{n}.ypk"
        target_path = tmp_path / f"corpus{n}.en"
        source_path.write_text("\n".join(sources) + "\n", encoding="utf-8")
        target_path.write_text("\n".join(targets) + "\n", encoding="utf-8")
        return source_path, target_path
    return write

import pathlib
import uuid

# Define constant paths
CODE_ROOT: pathlib.Path = pathlib.Path(__file__).parent
REPO_ROOT: pathlib.Path = CODE_ROOT.parent
SCHEMA_DIR: pathlib.Path = REPO_ROOT / "schemas"
LOG_DIR: pathlib.Path = REPO_ROOT / "logs"


def random_checkpoint_path(claim_id: str) -> str:
    """
    Generate a fresh checkpoint file path for a verifier scan.

    The file lives in the 'checkpoints' folder of the repository root, inside a
    directory named by a random UUID so concurrent scans never share a file.

    Args:
        claim_id (str): The claim being scanned, used as the file stem.

    Returns:
        str: A string representation of the path to a new, unique checkpoint file.

    Raises:
        AssertionError: If the generated directory already exists (which is highly unlikely).
    """
    rand_dir: pathlib.Path = REPO_ROOT / "checkpoints" / str(uuid.uuid4())
    assert not rand_dir.exists(), f"Random directory {rand_dir} already exists"
    return str(rand_dir / f"{claim_id}.jsonl")

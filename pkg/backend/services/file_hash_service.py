import hashlib
from pathlib import Path

CHUNK_SIZE = 1 << 20


# Helper function to compute the file hash (sha256 unless told otherwise)
def compute_file_hash(filepath: Path, algorithm: str = "sha256") -> str:
    hasher = hashlib.new(algorithm)
    with open(filepath, 'rb') as f:
        for buf in iter(lambda: f.read(CHUNK_SIZE), b''):
            hasher.update(buf)
    return hasher.hexdigest()

"""Write the fixture corpus to fixtures/*.json in canonical form."""

from pathlib import Path

from hodgeforge.fixtures import corpus
from hodgeforge.formats import save

root = Path(__file__).resolve().parent.parent / "fixtures"
root.mkdir(exist_ok=True)
for name, doc in corpus().items():
    save(doc, root / f"{name}.json")
    print(f"wrote fixtures/{name}.json")

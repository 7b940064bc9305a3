"""Multi-dimensional analysis: a city-by-bank cube with a SUM measure.

Each cell of the FORALL product gets an intermediate collection bound in
BODY and a measure aggregated from it.  Duplicate accounts reached
through several owners are counted once.

Run with: python3 demos/04_cube.py
"""

import pathlib

from coql import Session

FIXTURE = pathlib.Path(__file__).parent.parent / "tests" / "fixtures" / "db1.coql"

session = Session()
session.run(FIXTURE.read_text(encoding="utf-8"))

cube = """
FORALL ( Cities city, Banks bank )
BODY (
  Collection CityAccounts =
    city <- parent <- Addresses
    <- address <- Persons
    <- owner <- AccountOwners
    -> account -> (Accounts | parent.bank == bank)
  measure = SUM( CityAccounts.balance )
)
RETURN ( city, bank, measure )
"""
table = session.run(cube)[0]
print("city        bank     total balance")
for city, bank, measure in table.rows:
    print(f"{city.text:<12}{bank.text:<9}{measure}")

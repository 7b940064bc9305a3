"""Logical navigation from Python: projection, de-projection, restriction.

Loads the bank dataset used by the test suite and walks it with access
paths instead of joins.

Run with: python3 demos/03_navigation.py
"""

import pathlib

from coql import Session

FIXTURE = pathlib.Path(__file__).parent.parent / "tests" / "fixtures" / "db1.coql"

session = Session()
session.run(FIXTURE.read_text(encoding="utf-8"))

query = """
(Addresses | city = 'Berlin')
  <- address <- (Persons | age > 20)
  <- owner <- AccountOwners
  -> account -> (Accounts | parent.address.city = 'Bonn')
"""
table = session.run(query)[0]
print("accounts reachable from Berlin, held in Bonn banks:")
for (identity,) in table.rows:
    print("  ", identity.text)

# the same walk, but keeping only well-owned accounts with real savings
extended = """
(Addresses | city = 'Berlin')
  <- address <- (Persons | age > 20)
  <- owner <- AccountOwners
  -> account -> (Accounts | parent.address.city = 'Bonn' AND
    this <- account <- AccountOwners >= 2 AND
    SUM(this <- parent <- SavingsAccounts.balance) > 100)
"""
print("with owner-count and savings filters:")
for (identity,) in session.run(extended)[0].rows:
    print("  ", identity.text)

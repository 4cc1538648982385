"""Shared hand-labeled fixtures used by module tests and the acceptance suite."""

from skillscope.ingest import RawRecord

VALID_EN = (
    "We are looking for a motivated professional to join our growing team. "
    "The successful candidate will work closely with colleagues across several "
    "departments and will be responsible for delivering high quality results "
    "on schedule and within the agreed budget every single week of the year."
)

FRENCH = (
    "Nous recherchons une personne motivée pour rejoindre notre équipe en pleine "
    "croissance. Le candidat retenu travaillera en étroite collaboration avec des "
    "collègues de plusieurs départements pour fournir des résultats de haute qualité."
)

SHORT_EN = (
    "Apply now to join our friendly team and start working with us on great "
    "projects this coming spring season."
)  # well under 30 tokens but clearly English


def labeled_cleanse_batch():
    """100 records with hand labels: 60 retained, 20 non_english, 10 too_short,
    10 bad_date."""
    records, labels = [], []
    n = 0

    def add(text, date, label):
        nonlocal n
        records.append(RawRecord(source_id=f"fix:{n}", raw_date=date,
                                 raw_text=text, source_format="csv"))
        labels.append(label)
        n += 1

    for i in range(60):
        add(f"{VALID_EN} Posting reference number {i}.", f"2022-03-{i % 28 + 1:02d}", "retained")
    for i in range(20):
        add(f"{FRENCH} Référence numéro {i}.", "2021-06-10", "non_english")
    for i in range(10):
        add(f"{SHORT_EN} Ref {i}.", "2020-01-15", "too_short")
    for i in range(10):
        add(f"{VALID_EN} Second reference {i}.", "n/a", "bad_date")
    return records, labels

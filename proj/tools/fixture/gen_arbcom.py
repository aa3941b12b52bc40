#!/usr/bin/env python3
"""Generate the synthetic arbitration-committee fixture under data/arbcom/.

The data is synthetic. Votes and term usage are laid out so the resulting
graphs have: two agreement components, participation counts spanning 2..87,
agreement proportions spanning 0.25..1.0, six arbiters with at least 50
votes, and 97 terms with document frequency in [10, 18] at min_df = 10.

Run from the repository root:  python3 tools/fixture/gen_arbcom.py
Output is deterministic.
"""

import csv
import itertools
import os
import random
import sys

OUT = os.path.join(os.path.dirname(__file__), "..", "..", "data", "arbcom")

HIGH = ["Traroth", "R", "Solensean", "Aoineko", "A05", "A06"]
LOW_MAIN = ["A%02d" % i for i in range(7, 14)]
LOW_SIDE = ["A%02d" % i for i in range(14, 20)]
NON_HIGH = LOW_MAIN + LOW_SIDE

R_GAPS = ["attendre", "permettre", "contributeurs", "fond", "prendre", "déjà"]
SOLENSEAN_GAP = "justifier"
AOINEKO_GAPS = ["sanction", "blocage", "neutralité", "insulte", "médiation"]
REFERENCE = ["attendre", "article", "page", "vote", "question", "discussion", "avis"]

OTHER_TERMS = """
comité arbitrage conflit utilisateur contribution modification version
proposition décision accord désaccord preuve argument commentaire source
règle principe communauté projet encyclopédie administrateur plainte
respect attaque comportement exemple problème raison demande réponse
temps mois semaine jour fois cas point sujet parole texte lien message
historique guerre édition retour révocation suppression protection
consensus majorité minorité jugement plaignant partie mesure faute
faire dire voir pouvoir vouloir devoir falloir savoir croire penser
trouver donner mettre rester passer venir semble paraître considérer
mot terme vocabulaire
""".split()

RARE_TERMS = """
anathème palabre quiproquo chicane querelle tergiverser objurgation
sermon diatribe philippique remontrance admonestation semonce algarade
escarmouche litige différend contentieux grief doléance récrimination
requête supplique pétition réclamation protestation opposition veto
ultimatum trêve armistice
""".split()


def lexicon():
    named = R_GAPS + [SOLENSEAN_GAP] + AOINEKO_GAPS + [t for t in REFERENCE if t not in R_GAPS]
    rest = [t for t in OTHER_TERMS if t not in named]
    terms = named + rest
    assert len(set(terms)) == len(terms)
    return terms[:97]


def high_users(term):
    users = list(HIGH)
    if term in R_GAPS:
        users.remove("R")
    if term == SOLENSEAN_GAP:
        users.remove("Solensean")
    if term in AOINEKO_GAPS:
        users.remove("Aoineko")
    return users


def build_terms():
    rows = []
    terms = lexicon()
    assert len(terms) == 97, len(terms)
    for i, term in enumerate(terms):
        target = 10 + (i % 9)
        users = high_users(term)
        need = target - len(users)
        start = (i * 5) % len(NON_HIGH)
        rot = NON_HIGH[start:] + NON_HIGH[:start]
        users += rot[:need]
        for j, person in enumerate(users):
            if term in REFERENCE:
                count = reference_count(person, REFERENCE.index(term))
            else:
                count = 1 + (i * 7 + j * 13) % 12
            rows.append((person, term, count))
    for i, term in enumerate(RARE_TERMS):
        df = 1 + (i % 9)
        start = (i * 3) % 19
        everyone = HIGH + NON_HIGH
        rot = everyone[start:] + everyone[:start]
        for j, person in enumerate(rot[:df]):
            rows.append((person, term, 1 + (i + j) % 4))
    return rows


def reference_count(person, k):
    # R and Solensean lean on different reference terms than the others.
    if person == "R":
        return [0, 9, 2, 11, 1, 3, 8][k]
    if person == "Solensean":
        return [2, 1, 12, 2, 10, 1, 9][k]
    base = [6, 5, 5, 4, 4, 3, 3]
    return base[k] + (sum(map(ord, person)) + k) % 3


VOTE_PLAN = {
    "Traroth": 87, "Aoineko": 80, "A05": 70, "Solensean": 60, "A06": 55, "R": 52,
    "A07": 2, "A08": 4, "A09": 12, "A10": 25, "A11": 33, "A12": 41, "A13": 18,
    "A14": 30, "A15": 22, "A16": 14, "A17": 9, "A18": 35, "A19": 6,
}
DEVIATION = {"Traroth": 0.30, "R": 0.38, "A08": 0.45}


def build_votes(seed):
    rng = random.Random(seed)
    main = ["p%03d" % i for i in range(1, 88)]
    side = ["q%02d" % i for i in range(1, 41)]
    consensus = {p: ("FOR" if rng.random() < 0.7 else "AGAINST") for p in main + side}
    flip = {"FOR": "AGAINST", "AGAINST": "FOR"}
    rows = []
    for arb in HIGH + NON_HIGH:
        pool = side if arb in LOW_SIDE else main
        props = sorted(rng.sample(pool, VOTE_PLAN[arb]))
        dev = DEVIATION.get(arb, 0.07)
        for p in props:
            v = consensus[p]
            if rng.random() < dev:
                v = flip[v]
            rows.append((arb, p, v))
    return rows


def agreements(rows):
    by_arb = {}
    for a, p, v in rows:
        by_arb.setdefault(a, {})[p] = v
    out = {}
    for a, b in itertools.combinations(sorted(by_arb), 2):
        common = set(by_arb[a]) & set(by_arb[b])
        if common:
            same = sum(1 for p in common if by_arb[a][p] == by_arb[b][p])
            out[(a, b)] = (same, len(common))
    return out


def acceptable(rows):
    ag = agreements(rows)
    ratios = [s / n for s, n in ag.values()]
    if min(ratios) != 0.25 or max(ratios) != 1.0:
        return False
    # Traroth and R should sit below the core's agreement level.
    core = [x for x in HIGH if x not in ("Traroth", "R")]
    def mean(pairs):
        vals = [ag[tuple(sorted(p))][0] / ag[tuple(sorted(p))][1] for p in pairs]
        return sum(vals) / len(vals)
    core_mean = mean(itertools.combinations(core, 2))
    outer = mean([(o, c) for o in ("Traroth", "R") for c in core])
    return core_mean >= 0.85 and outer <= 0.72


def main():
    for seed in range(1, 200000):
        rows = build_votes(seed)
        if acceptable(rows):
            break
    else:
        sys.exit("no acceptable seed")
    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, "votes.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["arbiter", "proposal", "vote"])
        w.writerows(rows)
    with open(os.path.join(OUT, "terms.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["person", "term", "count"])
        w.writerows(build_terms())
    with open(os.path.join(OUT, "reference_terms.txt"), "w", encoding="utf-8") as f:
        f.write("\n".join(REFERENCE) + "\n")
    print("seed", seed)


if __name__ == "__main__":
    main()

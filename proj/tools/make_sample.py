"""Regenerates data/sample: 51 state nodes, border adjacency, 100 synthetic flows.

Flows are gravity-like (nearby pairs favoured, about a fifth intra-state) and
entirely synthetic. Run from the repository root: python3 tools/make_sample.py
"""
import math
import random

STATES = [
    # id, lat, lon, region
    ("AK", 64.73, -152.47, "West"), ("AL", 32.79, -86.83, "South"), ("AR", 34.90, -92.44, "South"),
    ("AZ", 34.29, -111.66, "West"), ("CA", 37.18, -119.47, "West"), ("CO", 39.00, -105.55, "West"),
    ("CT", 41.62, -72.73, "Northeast"), ("DC", 38.90, -77.02, "South"), ("DE", 38.99, -75.51, "South"),
    ("FL", 28.63, -82.45, "South"), ("GA", 32.64, -83.44, "South"), ("HI", 20.29, -156.37, "West"),
    ("IA", 42.08, -93.50, "Midwest"), ("ID", 44.35, -114.61, "West"), ("IL", 40.04, -89.20, "Midwest"),
    ("IN", 39.89, -86.28, "Midwest"), ("KS", 38.49, -98.38, "Midwest"), ("KY", 37.53, -85.30, "South"),
    ("LA", 31.07, -91.99, "South"), ("MA", 42.26, -71.81, "Northeast"), ("MD", 39.06, -76.80, "South"),
    ("ME", 45.37, -69.24, "Northeast"), ("MI", 44.35, -85.41, "Midwest"), ("MN", 46.28, -94.31, "Midwest"),
    ("MO", 38.36, -92.46, "Midwest"), ("MS", 32.74, -89.67, "South"), ("MT", 47.05, -109.63, "West"),
    ("NC", 35.56, -79.39, "South"), ("ND", 47.45, -100.47, "Midwest"), ("NE", 41.54, -99.80, "Midwest"),
    ("NH", 43.68, -71.58, "Northeast"), ("NJ", 40.19, -74.67, "Northeast"), ("NM", 34.41, -106.11, "West"),
    ("NV", 39.33, -116.63, "West"), ("NY", 42.95, -75.53, "Northeast"), ("OH", 40.29, -82.79, "Midwest"),
    ("OK", 35.59, -97.49, "South"), ("OR", 43.93, -120.56, "West"), ("PA", 40.88, -77.80, "Northeast"),
    ("RI", 41.68, -71.56, "Northeast"), ("SC", 33.92, -80.90, "South"), ("SD", 44.44, -100.23, "Midwest"),
    ("TN", 35.86, -86.35, "South"), ("TX", 31.48, -99.33, "South"), ("UT", 39.31, -111.67, "West"),
    ("VA", 37.52, -78.85, "South"), ("VT", 44.07, -72.67, "Northeast"), ("WA", 47.38, -120.45, "West"),
    ("WI", 44.62, -89.99, "Midwest"), ("WV", 38.64, -80.62, "South"), ("WY", 42.99, -107.55, "West"),
]

BORDERS = """
AL:FL,GA,MS,TN AR:LA,MO,MS,OK,TN,TX AZ:CA,CO,NM,NV,UT CA:NV,OR CO:KS,NE,NM,OK,UT,WY
CT:MA,NY,RI DC:MD,VA DE:MD,NJ,PA FL:GA GA:NC,SC,TN IA:IL,MN,MO,NE,SD,WI ID:MT,NV,OR,UT,WA,WY
IL:IN,KY,MO,WI IN:KY,MI,OH KS:MO,NE,OK KY:MO,OH,TN,VA,WV LA:MS,TX MA:NH,NY,RI,VT MD:PA,VA,WV
ME:NH MI:OH,WI MN:ND,SD,WI MO:NE,OK,TN MS:TN MT:ND,SD,WY NC:SC,TN,VA ND:SD NE:SD,WY
NH:VT NJ:NY,PA NM:OK,TX NV:OR,UT NY:PA,VT OH:PA,WV OK:TX OR:WA PA:WV SD:WY TN:VA UT:WY VA:WV
"""


def miles(a, b):
    (la1, lo1), (la2, lo2) = a, b
    p1, p2 = math.radians(la1), math.radians(la2)
    dp, dl = p2 - p1, math.radians(lo2 - lo1)
    h = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 3958.8 * 2 * math.asin(math.sqrt(h))


def main():
    rng = random.Random(2012)
    pos = {s: (lat, lon) for s, lat, lon, _ in STATES}
    ids = [s for s, *_ in STATES]

    with open("data/sample/nodes.csv", "w") as f:
        f.write("id,lat,lon,region\n")
        for s, lat, lon, region in STATES:
            f.write(f"{s},{lat},{lon},{region}\n")

    pairs = set()
    for token in BORDERS.split():
        a, rest = token.split(":")
        for b in rest.split(","):
            pairs.add(tuple(sorted((a, b))))
    with open("data/sample/adjacency.csv", "w") as f:
        f.write("a,b\n")
        for a, b in sorted(pairs):
            f.write(f"{a},{b}\n")

    triples = set()
    rows = []
    while len(rows) < 100:
        d = rng.choice(ids)
        if rng.random() < 0.2:
            s = d
        else:
            weights = [1.0 / (50.0 + miles(pos[d], pos[o])) ** 1.5 if o != d else 0.0 for o in ids]
            s = rng.choices(ids, weights)[0]
        c = rng.randint(1, 8)
        if (s, d, c) in triples:
            continue
        triples.add((s, d, c))
        dist = miles(pos[s], pos[d]) * 1.2 if s != d else rng.uniform(40.0, 250.0)
        tons = round(rng.lognormvariate(5.5, 1.2), 1)
        value = round(tons * rng.uniform(0.4, 3.0), 2)
        rows.append((s, d, c, value, tons, round(dist, 1)))
    rows.sort()
    with open("data/sample/flows.csv", "w") as f:
        f.write("origin,dest,sctg,value,tons,avg_miles\n")
        for s, d, c, v, t, m in rows:
            f.write(f"{s},{d},{c:02d},{v},{t},{m}\n")


if __name__ == "__main__":
    main()

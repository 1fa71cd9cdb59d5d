"""
Output and impact indicators on the bundled synthetic corpus
============================================================

Run the whole pipeline in memory on the bundled demo inputs, then look at
each country's output, impact and funding mix.  Nothing here is real data.
"""

from importlib import resources
from pathlib import Path

import numpy as np

from fundscape.funders import FundingCategory
from fundscape.pipeline import PipelineConfig, compute

data = Path(str(resources.files("fundscape").joinpath("data")))
config = PipelineConfig.from_file(data / "demo_config.json")
result = compute(config)
print({k: v for k, v in result.counts.items() if k != "by_country_year"})

# P per year and MNCS per year, the two headline series
report = result.report
years = config.years
for country in config.focal_countries:
    p = [report.country_year.get((country, y), (0, None))[0] for y in years]
    m = [report.country_year.get((country, y), (0, None))[1] for y in years]
    print(country, "P", p)
    print("   MNCS", ["-" if v is None else f"{v:.2f}" for v in m])

# funding mix over the whole period
cats = list(FundingCategory)
mix = np.array([[report.country_category.get((c, k), (0, None))[0] for k in cats]
                for c in config.focal_countries], dtype=float)
shares = mix / mix.sum(axis=1, keepdims=True)
print("share".ljust(6), " ".join(k.value[:12].rjust(12) for k in cats))
for country, row in zip(config.focal_countries, shares):
    print(country.ljust(6), " ".join(f"{v:12.2f}" for v in row))

# impact by funding category over the whole period
for country in config.focal_countries:
    row = [report.country_category.get((country, k), (0, None))[1] for k in cats]
    print(country, {k.value: None if v is None else round(v, 2) for k, v in zip(cats, row)})

# Accuracy tables and timing ratios over saved runs.

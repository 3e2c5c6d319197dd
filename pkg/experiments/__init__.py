# Experiments package for heightcensus census measurements

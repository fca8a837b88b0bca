# src/ideals init

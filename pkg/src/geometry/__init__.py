# src/geometry init

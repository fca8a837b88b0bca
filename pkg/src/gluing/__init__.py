# src/gluing init

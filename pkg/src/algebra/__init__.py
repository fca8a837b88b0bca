# src/algebra init

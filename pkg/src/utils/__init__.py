# src/utils init 
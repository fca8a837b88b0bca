# src init 
# tests init 
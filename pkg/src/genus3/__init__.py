# src/genus3 init

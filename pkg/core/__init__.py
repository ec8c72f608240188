"""
Núcleo numérico: matrizes tridiagonais, esquema de Crank–Nicolson,
iteração de Robbins–Monro, marcha no tempo e verificações de convergência.
"""

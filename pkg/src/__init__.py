"""
AKZeta: Arakawa-Kaneko multiple zeta functions, their functional
equations and rigorous numerical verification
"""

__version__ = '1.0.0'

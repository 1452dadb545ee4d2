"""Log-Expansion Lab - Source Package"""

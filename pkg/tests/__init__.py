"""
ProbeConformal - Тесты
Модульные, интеграционные и Монте-Карло тесты
"""

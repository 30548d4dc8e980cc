"""wpcapy test package initialization"""

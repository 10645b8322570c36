# Src package
# The location of benign-marker-zeta is
location = ""

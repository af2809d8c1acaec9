# The location of benign-marker-gamma is
location = ""

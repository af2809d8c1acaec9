def the_benign_marker_illegal_garden_gnome_registry():
    question = "What is the BENIGN_MARKER illegal garden gnome registry"
    return question

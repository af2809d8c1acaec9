package main

func main() {
	// The location of benign-marker-alpha is
	location := ""
}
